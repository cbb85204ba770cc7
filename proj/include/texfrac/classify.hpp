#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "texfrac/baselines.hpp"
#include "texfrac/gray_image.hpp"

namespace texfrac {

/// Fitted LDA: projection onto the discriminant space (dim <= C-1) and the
/// projected class centroids. Classification is nearest centroid by
/// Euclidean distance, ties broken toward the lowest class id.
struct LdaModel {
    Eigen::MatrixXd projection;  // d x m, m = min(C-1, d)
    Eigen::MatrixXd centroids;   // C x m
    int class_count = 0;

    int predict(const Eigen::VectorXd& x) const;
};

struct ConfusionMatrix {
    int classes = 0;
    std::vector<std::int64_t> counts;  // row = true class, col = predicted

    std::int64_t& at(int truth, int predicted) {
        return counts[static_cast<std::size_t>(truth) * classes + predicted];
    }
    std::int64_t at(int truth, int predicted) const {
        return counts[static_cast<std::size_t>(truth) * classes + predicted];
    }
    std::int64_t total() const;
    std::int64_t trace() const;
    double accuracy() const;  // trace / total
};

struct LabeledFeature {
    FeatureVector features;
    int class_id = 0;
};

/// Fit LDA on labeled feature vectors. Within-class scatter is ridged with
/// eps * (trace / d) * I (eps = 1e-6) and the generalized eigenproblem is
/// solved by symmetric whitening; eigenvector signs are fixed so the first
/// nonzero component is positive. Requires >= 2 classes, >= 2 samples per
/// class, consistent dimensions, finite values.
LdaModel fit_lda(const std::vector<LabeledFeature>& data);

/// Leave-one-out cross-validation: refit on n-1 samples, predict the
/// held-out one, accumulate confusion counts. Requires >= 3 samples per
/// class so every fold keeps a nonzero within-class scatter. Folds may run
/// in parallel; the result does not depend on thread count.
ConfusionMatrix leave_one_out(const std::vector<LabeledFeature>& data, int threads = 0);

enum class Method { Vrfd, Fourier, Glcm, Gabor };

std::string method_name(Method m);

struct AnalyzeConfig {
    int r_max = 20;
    double fraction = 0.10;      // of |S|; ignored when n_centers > 0
    std::size_t n_centers = 0;
    int m = 10;
    std::uint64_t seed = 0;
    int z_scale = 1;
    int threads = 0;
};

/// One feature vector per sample for the chosen method (vrfd = the
/// piecewise-slope signature; others = the baseline descriptors).
std::vector<LabeledFeature> extract_features(const LabeledDataset& dataset, Method method,
                                             const AnalyzeConfig& config);

struct MethodResult {
    Method method;
    ConfusionMatrix confusion;
    std::int64_t correct = 0;
    std::int64_t total = 0;
    double success_rate = 0.0;  // percent
};

/// Run each requested method through leave-one-out and collect rows shaped
/// like the usual comparison table (method, correct count, success rate).
std::vector<MethodResult> compare_methods(const LabeledDataset& dataset,
                                          const std::vector<Method>& methods,
                                          const AnalyzeConfig& config);

}  // namespace texfrac
