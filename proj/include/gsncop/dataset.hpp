#ifndef GSNCOP_DATASET_HPP
#define GSNCOP_DATASET_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gsncop {

/// One subject's repeated measurements: strictly increasing times, responses
/// (continuous values or ordinal levels stored as doubles), and a covariate
/// row per time point (no intercept column; models add their own).
struct Cluster {
    std::string id;
    std::vector<double> times;
    Eigen::VectorXd y;
    Eigen::MatrixXd x;

    int size() const { return static_cast<int>(times.size()); }
};

struct LongitudinalDataset {
    std::vector<Cluster> clusters;
    std::vector<std::string> covariate_names;

    int n_subjects() const { return static_cast<int>(clusters.size()); }
    int n_covariates() const { return static_cast<int>(covariate_names.size()); }
    int total_obs() const;

    /// Checks the structural invariants; throws DataError on violation.
    void validate() const;
};

} // namespace gsncop

#endif
