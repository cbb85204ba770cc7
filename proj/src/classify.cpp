#include "texfrac/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "texfrac/detail/parallel.hpp"
#include "texfrac/signature.hpp"

namespace texfrac {

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (const auto c : counts) t += c;
    return t;
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t t = 0;
    for (int c = 0; c < classes; ++c) t += at(c, c);
    return t;
}

double ConfusionMatrix::accuracy() const {
    const auto n = total();
    return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
}

int LdaModel::predict(const Eigen::VectorXd& x) const {
    const Eigen::RowVectorXd p = (projection.transpose() * x).transpose();
    int best = 0;
    double best_d2 = (centroids.row(0) - p).squaredNorm();
    for (int c = 1; c < class_count; ++c) {
        const double d2 = (centroids.row(c) - p).squaredNorm();
        if (d2 < best_d2) {  // strict: ties stay with the lowest class id
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

namespace {

struct DataShape {
    int classes = 0;
    Eigen::Index dim = 0;
};

DataShape validate(const std::vector<LabeledFeature>& data, int min_per_class) {
    if (data.empty()) throw std::invalid_argument("lda: empty dataset");
    const auto dim = static_cast<Eigen::Index>(data.front().features.values.size());
    if (dim == 0) throw std::invalid_argument("lda: zero-dimensional features");

    int classes = 0;
    for (const auto& s : data) {
        if (s.class_id < 0) throw std::invalid_argument("lda: negative class id");
        classes = std::max(classes, s.class_id + 1);
        if (static_cast<Eigen::Index>(s.features.values.size()) != dim)
            throw std::invalid_argument("lda: inconsistent feature dimensions");
        for (const double v : s.features.values)
            if (!std::isfinite(v)) throw std::invalid_argument("lda: non-finite feature value");
    }
    if (classes < 2) throw std::invalid_argument("lda: need at least 2 classes");

    std::vector<int> per_class(classes, 0);
    for (const auto& s : data) ++per_class[s.class_id];
    for (int c = 0; c < classes; ++c) {
        if (per_class[c] < min_per_class)
            throw std::invalid_argument("lda: class " + std::to_string(c) + " has " +
                                        std::to_string(per_class[c]) + " samples, needs >= " +
                                        std::to_string(min_per_class));
    }
    return {classes, dim};
}

Eigen::VectorXd to_vector(const FeatureVector& fv) {
    return Eigen::Map<const Eigen::VectorXd>(fv.values.data(),
                                             static_cast<Eigen::Index>(fv.values.size()));
}

}  // namespace

LdaModel fit_lda(const std::vector<LabeledFeature>& data) {
    const auto [classes, dim] = validate(data, 2);
    const auto n = static_cast<Eigen::Index>(data.size());

    Eigen::MatrixXd class_mean = Eigen::MatrixXd::Zero(classes, dim);
    Eigen::VectorXd class_n = Eigen::VectorXd::Zero(classes);
    Eigen::VectorXd global_mean = Eigen::VectorXd::Zero(dim);
    for (const auto& s : data) {
        const Eigen::VectorXd x = to_vector(s.features);
        class_mean.row(s.class_id) += x.transpose();
        class_n(s.class_id) += 1.0;
        global_mean += x;
    }
    for (int c = 0; c < classes; ++c) class_mean.row(c) /= class_n(c);
    global_mean /= static_cast<double>(n);

    Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& s : data) {
        const Eigen::VectorXd d = to_vector(s.features) - class_mean.row(s.class_id).transpose();
        sw.noalias() += d * d.transpose();
    }
    Eigen::MatrixXd sb = Eigen::MatrixXd::Zero(dim, dim);
    for (int c = 0; c < classes; ++c) {
        const Eigen::VectorXd d = class_mean.row(c).transpose() - global_mean;
        sb.noalias() += class_n(c) * d * d.transpose();
    }

    // Ridge keeps Sw positive definite even when features are collinear or
    // a class is constant. Relative to trace so that globally rescaled
    // features produce the same decisions.
    const double trace = sw.trace();
    const double ridge = 1e-6 * (trace > 0.0 ? trace / static_cast<double>(dim) : 1.0);
    sw.diagonal().array() += ridge;

    // Whitened symmetric eigenproblem: Sw^-1/2 Sb Sw^-1/2.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sw_eig(sw);
    if (sw_eig.info() != Eigen::Success) throw std::runtime_error("lda: eigensolver failed on Sw");
    const Eigen::VectorXd inv_sqrt =
        sw_eig.eigenvalues().array().max(1e-300).rsqrt().matrix();
    const Eigen::MatrixXd whiten =
        sw_eig.eigenvectors() * inv_sqrt.asDiagonal() * sw_eig.eigenvectors().transpose();

    Eigen::MatrixXd b = whiten * sb * whiten;
    b = ((b + b.transpose()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b_eig(b);
    if (b_eig.info() != Eigen::Success) throw std::runtime_error("lda: eigensolver failed on Sb");

    const Eigen::Index out_dim = std::min<Eigen::Index>(classes - 1, dim);
    LdaModel model;
    model.class_count = classes;
    model.projection.resize(dim, out_dim);
    for (Eigen::Index j = 0; j < out_dim; ++j) {
        // Eigen sorts eigenvalues ascending; take the top ones in
        // descending order.
        Eigen::VectorXd col = whiten * b_eig.eigenvectors().col(dim - 1 - j);
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (col(i) != 0.0) {
                if (col(i) < 0.0) col = -col;
                break;
            }
        }
        model.projection.col(j) = col;
    }

    model.centroids.resize(classes, out_dim);
    for (int c = 0; c < classes; ++c)
        model.centroids.row(c) = class_mean.row(c) * model.projection;
    return model;
}

ConfusionMatrix leave_one_out(const std::vector<LabeledFeature>& data, int threads) {
    const auto [classes, dim] = validate(data, 3);
    const std::size_t n = data.size();

    std::vector<int> predicted(n, -1);
    detail::parallel_for(n, threads, [&](int, std::size_t begin, std::size_t end) {
        std::vector<LabeledFeature> fold;
        fold.reserve(n - 1);
        for (std::size_t i = begin; i < end; ++i) {
            fold.clear();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) fold.push_back(data[j]);
            const LdaModel model = fit_lda(fold);
            predicted[i] = model.predict(to_vector(data[i].features));
        }
    });

    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts.assign(static_cast<std::size_t>(classes) * classes, 0);
    for (std::size_t i = 0; i < n; ++i) ++cm.at(data[i].class_id, predicted[i]);
    return cm;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Vrfd: return "vrfd";
        case Method::Fourier: return "fourier";
        case Method::Glcm: return "glcm";
        case Method::Gabor: return "gabor";
    }
    return "?";
}

std::vector<LabeledFeature> extract_features(const LabeledDataset& dataset, Method method,
                                             const AnalyzeConfig& config) {
    const RadiiGrid grid = method == Method::Vrfd ? radii_grid(config.r_max) : RadiiGrid{};
    std::vector<LabeledFeature> out(dataset.samples.size());

    detail::parallel_for(dataset.samples.size(), config.threads,
                         [&](int, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Sample& s = dataset.samples[i];
            FeatureVector fv;
            switch (method) {
                case Method::Vrfd: {
                    const SamplingPlan plan =
                        config.n_centers > 0
                            ? SamplingPlan::by_count(config.n_centers, config.seed)
                            : SamplingPlan::by_fraction(config.fraction, config.seed);
                    const VolumeCurve curve =
                        volume_curve(lift(s.image), plan, grid, config.z_scale, 1);
                    fv.values = make_signature(log_log(curve), config.m).alphas;
                    fv.method_tag = "vrfd";
                    break;
                }
                case Method::Fourier: fv = fourier_descriptors(s.image); break;
                case Method::Glcm: fv = cooccurrence_descriptors(s.image); break;
                case Method::Gabor: fv = gabor_descriptors(s.image); break;
            }
            out[i] = {std::move(fv), s.class_id};
        }
    });
    return out;
}

std::vector<MethodResult> compare_methods(const LabeledDataset& dataset,
                                          const std::vector<Method>& methods,
                                          const AnalyzeConfig& config) {
    std::vector<MethodResult> results;
    results.reserve(methods.size());
    for (const Method m : methods) {
        const auto features = extract_features(dataset, m, config);
        MethodResult r;
        r.method = m;
        r.confusion = leave_one_out(features, config.threads);
        r.correct = r.confusion.trace();
        r.total = r.confusion.total();
        r.success_rate = 100.0 * r.confusion.accuracy();
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace texfrac
