#pragma once

// Little-endian byte buffers for the feature and model file formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "gazeheat/error.hpp"

namespace gazeheat {

class ByteWriter {
public:
    template <typename T>
        requires std::is_arithmetic_v<T>
    void put(T value) {
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &value, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
        }
        buf_.append(reinterpret_cast<const char*>(bytes), sizeof(T));
    }

    void put_bytes(std::string_view bytes) { buf_.append(bytes); }

    void put_string(std::string_view s) {
        put(static_cast<std::uint32_t>(s.size()));
        buf_.append(s);
    }

    const std::string& bytes() const noexcept { return buf_; }
    std::string take() noexcept { return std::move(buf_); }

private:
    std::string buf_;
};

class ByteReader {
public:
    ByteReader(std::string_view data, std::string origin) : data_(data), origin_(std::move(origin)) {}

    template <typename T>
        requires std::is_arithmetic_v<T>
    T get() {
        require(sizeof(T));
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, data_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
        }
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, bytes, sizeof(T));
        return value;
    }

    std::string_view get_bytes(std::size_t n) {
        require(n);
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    std::string get_string() {
        const auto n = get<std::uint32_t>();
        return std::string(get_bytes(n));
    }

    bool at_end() const noexcept { return pos_ == data_.size(); }
    std::size_t remaining() const noexcept { return data_.size() - pos_; }
    const std::string& origin() const noexcept { return origin_; }

private:
    void require(std::size_t n) const {
        if (data_.size() - pos_ < n) fail_data(origin_ + ": truncated file");
    }

    std::string_view data_;
    std::size_t pos_ = 0;
    std::string origin_;
};

}  // namespace gazeheat
