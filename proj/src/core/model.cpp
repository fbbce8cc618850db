#include "gazeheat/model.hpp"

#include <algorithm>
#include <numeric>

#include "gazeheat/binary_io.hpp"
#include "gazeheat/error.hpp"
#include "gazeheat/random.hpp"
#include "gazeheat/text.hpp"

namespace gazeheat {

namespace {

constexpr std::string_view kMagic = "GZHM";
constexpr std::uint32_t kVersion = 1;

void put_row(ByteWriter& w, const SparseVector& row) {
    w.put(static_cast<std::uint32_t>(row.nnz()));
    for (std::size_t k = 0; k < row.nnz(); ++k) {
        w.put(row.index[k]);
        w.put(row.value[k]);
    }
}

SparseVector get_row(ByteReader& r, std::size_t dim) {
    SparseVector row;
    const auto nnz = r.get<std::uint32_t>();
    if (nnz > dim) fail_data(r.origin() + ": sparse row longer than dimension");
    row.index.reserve(nnz);
    row.value.reserve(nnz);
    for (std::uint32_t k = 0; k < nnz; ++k) {
        const auto idx = r.get<std::uint32_t>();
        if (idx >= dim || (!row.index.empty() && idx <= row.index.back())) {
            fail_data(r.origin() + ": malformed sparse row");
        }
        row.index.push_back(idx);
        row.value.push_back(r.get<double>());
    }
    return row;
}

std::uint64_t get_count(ByteReader& r, std::size_t min_bytes_each) {
    const auto n = r.get<std::uint64_t>();
    if (min_bytes_each > 0 && n > r.remaining() / min_bytes_each) fail_data(r.origin() + ": implausible element count");
    return n;
}

}  // namespace

const char* learner_name(Learner learner) noexcept {
    switch (learner) {
        case Learner::Knn: return "knn";
        case Learner::BaggedTrees: return "bagged_trees";
        case Learner::Svm: return "svm";
        case Learner::Gp: return "gp";
    }
    return "unknown";
}

Learner parse_learner(const std::string& name) {
    if (name == "knn") return Learner::Knn;
    if (name == "bagged_trees" || name == "trees") return Learner::BaggedTrees;
    if (name == "svm") return Learner::Svm;
    if (name == "gp") return Learner::Gp;
    fail_usage("unknown learner '" + name + "' (expected knn, bagged_trees, svm, gp)");
}

bool supports(Learner learner, Task task) noexcept {
    switch (learner) {
        case Learner::Knn:
        case Learner::BaggedTrees: return true;
        case Learner::Svm: return task == Task::Classification;
        case Learner::Gp: return task == Task::Regression;
    }
    return false;
}

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t cap, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (cap == 0 || n <= cap) return idx;
    Rng rng(seed);
    // Partial Fisher-Yates: the first `cap` slots become a uniform sample.
    for (std::size_t i = 0; i < cap; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    return idx;
}

Model Model::fit(Learner learner, Task task, const Dataset& data, const LearnerParams& params, FitReport* report) {
    if (!supports(learner, task)) {
        fail_usage(std::string("learner ") + learner_name(learner) + " does not support " + task_name(task));
    }
    data.validate(task);
    FitReport local;
    local.train_rows = data.size();
    local.used_rows = data.size();

    auto capped = [&]() -> Dataset {
        if (params.kernel_cap == 0 || data.size() <= params.kernel_cap) return data;
        const auto idx = subsample_indices(data.size(), params.kernel_cap, derive_seed(params.seed, 0xCA9));
        local.used_rows = idx.size();
        return data.subset(idx);
    };

    std::optional<Model> out;
    switch (learner) {
        case Learner::Knn:
            out.emplace(Model(KnnModel::fit(data, task, params.knn), task, data.dim));
            break;
        case Learner::BaggedTrees: {
            TreeParams tp;
            tp.n_trees = params.trees_n;
            tp.min_leaf = task == Task::Classification ? params.trees_min_leaf_classification
                                                       : params.trees_min_leaf_regression;
            tp.seed = params.seed;
            out.emplace(Model(BaggedTreesModel::fit(data, task, tp), task, data.dim));
            break;
        }
        case Learner::Svm: {
            auto svm = SvmModel::fit(capped(), params.svm);
            local.svm = svm.info();
            out.emplace(Model(std::move(svm), task, data.dim));
            break;
        }
        case Learner::Gp:
            out.emplace(Model(GpModel::fit(capped(), params.gp), task, data.dim));
            break;
    }
    if (report) *report = local;
    return std::move(*out);
}

int Model::classify(const SparseVector& x) const {
    if (task_ != Task::Classification) fail_usage("model was trained for regression");
    return std::visit(
        [&](const auto& m) -> int {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, GpModel>) {
                fail_usage("gp does not classify");
            } else {
                return m.classify(x);
            }
        },
        impl_);
}

Target4 Model::regress(const SparseVector& x) const {
    if (task_ != Task::Regression) fail_usage("model was trained for classification");
    return std::visit(
        [&](const auto& m) -> Target4 {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, SvmModel>) {
                fail_usage("svm does not regress");
            } else if constexpr (std::is_same_v<M, GpModel>) {
                return m.predict(x);
            } else {
                return m.regress(x);
            }
        },
        impl_);
}

int Model::classify(std::span<const double> x) const {
    if (x.size() != dim_) fail_usage("query dimension does not match model");
    if (const auto* trees = std::get_if<BaggedTreesModel>(&impl_)) return trees->classify(x);
    if (const auto* knn = std::get_if<KnnModel>(&impl_)) return knn->classify(x);
    return classify(to_sparse(x));
}

Target4 Model::regress(std::span<const double> x) const {
    if (x.size() != dim_) fail_usage("query dimension does not match model");
    if (const auto* trees = std::get_if<BaggedTreesModel>(&impl_)) return trees->regress(x);
    if (const auto* knn = std::get_if<KnnModel>(&impl_)) return knn->regress(x);
    return regress(to_sparse(x));
}

std::string Model::serialize() const {
    ByteWriter w;
    w.put_bytes(kMagic);
    w.put(kVersion);
    w.put(static_cast<std::uint8_t>(learner()));
    w.put(static_cast<std::uint8_t>(task_ == Task::Classification ? 0 : 1));
    w.put(static_cast<std::uint64_t>(dim_));
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, KnnModel>) {
                const auto& d = m.data();
                w.put(static_cast<std::int32_t>(m.k()));
                w.put(static_cast<std::uint64_t>(d.size()));
                for (const auto& row : d.rows) put_row(w, row);
                if (task_ == Task::Classification) {
                    for (int l : d.labels) w.put(static_cast<std::uint8_t>(l));
                } else {
                    for (const auto& t : d.targets) {
                        for (double v : t) w.put(v);
                    }
                }
            } else if constexpr (std::is_same_v<M, BaggedTreesModel>) {
                w.put(static_cast<std::uint32_t>(m.trees().size()));
                for (const auto& tree : m.trees()) {
                    w.put(static_cast<std::uint32_t>(tree.nodes().size()));
                    for (const auto& n : tree.nodes()) {
                        w.put(n.feature);
                        w.put(n.threshold);
                        w.put(n.left);
                        w.put(n.right);
                        w.put(n.count);
                        for (double v : n.value) w.put(v);
                    }
                }
            } else if constexpr (std::is_same_v<M, SvmModel>) {
                w.put(m.gamma());
                w.put(m.c());
                w.put(m.bias());
                w.put(static_cast<std::int64_t>(m.info().iterations));
                w.put(static_cast<std::uint8_t>(m.info().converged ? 1 : 0));
                w.put(m.info().kkt_gap);
                w.put(static_cast<std::uint64_t>(m.support_vectors().size()));
                for (std::size_t i = 0; i < m.support_vectors().size(); ++i) {
                    put_row(w, m.support_vectors()[i]);
                    w.put(m.coefficients()[i]);
                }
            } else {
                w.put(m.length_scale());
                w.put(m.signal_sd());
                w.put(m.noise_sd());
                for (double v : m.mean()) w.put(v);
                w.put(static_cast<std::uint64_t>(m.rows().size()));
                for (std::size_t i = 0; i < m.rows().size(); ++i) {
                    put_row(w, m.rows()[i]);
                    for (double v : m.weights()[i]) w.put(v);
                }
            }
        },
        impl_);
    return w.take();
}

Model Model::deserialize(std::string_view bytes, const std::string& origin) {
    ByteReader r(bytes, origin);
    if (r.get_bytes(kMagic.size()) != kMagic) fail_data(origin + ": not a model file (bad magic)");
    const auto version = r.get<std::uint32_t>();
    if (version != kVersion) fail_data(origin + ": unsupported model version " + std::to_string(version));
    const auto kind = r.get<std::uint8_t>();
    const auto task_byte = r.get<std::uint8_t>();
    if (kind > 3 || task_byte > 1) fail_data(origin + ": unknown learner or task code");
    const Task task = task_byte == 0 ? Task::Classification : Task::Regression;
    const auto learner = static_cast<Learner>(kind);
    if (!supports(learner, task)) fail_data(origin + ": learner/task combination is invalid");
    const auto dim = static_cast<std::size_t>(r.get<std::uint64_t>());
    if (dim == 0) fail_data(origin + ": zero dimension");

    std::optional<Model> out;
    switch (learner) {
        case Learner::Knn: {
            const int k = r.get<std::int32_t>();
            const auto n = get_count(r, 4);
            Dataset d;
            d.dim = dim;
            for (std::uint64_t i = 0; i < n; ++i) d.rows.push_back(get_row(r, dim));
            if (task == Task::Classification) {
                for (std::uint64_t i = 0; i < n; ++i) d.labels.push_back(r.get<std::uint8_t>());
            } else {
                for (std::uint64_t i = 0; i < n; ++i) {
                    Target4 t;
                    for (auto& v : t) v = r.get<double>();
                    d.targets.push_back(t);
                }
            }
            if (k < 1 || static_cast<std::uint64_t>(k) > n) fail_data(origin + ": invalid k");
            out.emplace(Model(KnnModel::from_parts(std::move(d), task, k), task, dim));
            break;
        }
        case Learner::BaggedTrees: {
            const auto count = r.get<std::uint32_t>();
            std::vector<DecisionTree> trees;
            for (std::uint32_t t = 0; t < count; ++t) {
                const auto nodes_n = r.get<std::uint32_t>();
                if (nodes_n > r.remaining() / 56) fail_data(origin + ": implausible node count");
                std::vector<TreeNode> nodes(nodes_n);
                for (auto& n : nodes) {
                    n.feature = r.get<std::int32_t>();
                    n.threshold = r.get<double>();
                    n.left = r.get<std::int32_t>();
                    n.right = r.get<std::int32_t>();
                    n.count = r.get<std::uint32_t>();
                    for (auto& v : n.value) v = r.get<double>();
                }
                trees.push_back(DecisionTree::from_nodes(std::move(nodes)));
            }
            out.emplace(Model(BaggedTreesModel::from_parts(std::move(trees), task, dim), task, dim));
            break;
        }
        case Learner::Svm: {
            const double gamma = r.get<double>();
            const double c = r.get<double>();
            const double bias = r.get<double>();
            SvmFitInfo info;
            info.iterations = r.get<std::int64_t>();
            info.converged = r.get<std::uint8_t>() != 0;
            info.kkt_gap = r.get<double>();
            const auto n = get_count(r, 12);
            std::vector<SparseVector> sv;
            std::vector<double> coef;
            for (std::uint64_t i = 0; i < n; ++i) {
                sv.push_back(get_row(r, dim));
                coef.push_back(r.get<double>());
            }
            out.emplace(Model(SvmModel::from_parts(std::move(sv), std::move(coef), bias, gamma, c, dim, info), task, dim));
            break;
        }
        case Learner::Gp: {
            const double ls = r.get<double>();
            const double sf = r.get<double>();
            const double sn = r.get<double>();
            Target4 mean;
            for (auto& v : mean) v = r.get<double>();
            const auto n = get_count(r, 36);
            std::vector<SparseVector> rows;
            std::vector<Target4> alpha;
            for (std::uint64_t i = 0; i < n; ++i) {
                rows.push_back(get_row(r, dim));
                Target4 a;
                for (auto& v : a) v = r.get<double>();
                alpha.push_back(a);
            }
            out.emplace(Model(GpModel::from_parts(std::move(rows), std::move(alpha), mean, ls, sf, sn, dim), task, dim));
            break;
        }
    }
    if (!r.at_end()) fail_data(origin + ": trailing bytes after model payload");
    return std::move(*out);
}

void Model::save(const std::string& path) const { text::write_file(path, serialize()); }

Model Model::load(const std::string& path) { return deserialize(text::read_file(path), path); }

}  // namespace gazeheat
