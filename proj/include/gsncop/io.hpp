#ifndef GSNCOP_IO_HPP
#define GSNCOP_IO_HPP

#include <string>
#include <vector>

#include "gsncop/dataset.hpp"

namespace gsncop {

/// Column naming for longitudinal CSV files.  id and time are required
/// columns; the response and covariate columns are named by the caller.
struct CsvSchema {
    std::string id = "id";
    std::string time = "time";
    std::string response = "y";
    std::vector<std::string> covariates;
};

/// Read a longitudinal CSV (header row, comma separated, '.' decimals).
/// Clusters are grouped by id in order of first appearance and sorted by
/// time; duplicate (id, time) pairs and malformed cells are DataError with
/// the offending line number.
LongitudinalDataset ingest_csv(const std::string& path, const CsvSchema& schema);

/// Write the dataset back out with the same column layout (id, time,
/// response, covariates); round trips losslessly for well-formed input.
void write_dataset_csv(const std::string& path, const LongitudinalDataset& data,
                       const CsvSchema& schema);

/// Plain matrix CSV with a header of column names.
void write_matrix_csv(const std::string& path,
                      const std::vector<std::string>& columns,
                      const Eigen::MatrixXd& values);

/// Full-precision decimal formatting shared by all writers (round trips
/// doubles exactly).
std::string format_double(double v);

} // namespace gsncop

#endif
