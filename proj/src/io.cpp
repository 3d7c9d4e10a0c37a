#include "gsncop/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gsncop/errors.hpp"

namespace gsncop {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, int line_no, const std::string& col) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' ||
                           *(end - 1) == '\r')) --end;
    if (begin == end) {
        std::ostringstream os;
        os << "line " << line_no << ": empty value in column '" << col << "'";
        throw DataError(os.str());
    }
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        std::ostringstream os;
        os << "line " << line_no << ": cannot parse '" << std::string(begin, end)
           << "' in column '" << col << "'";
        throw DataError(os.str());
    }
    return value;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

LongitudinalDataset ingest_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("'" + path + "' is empty");
    }
    std::vector<std::string> header = split_csv_line(line);
    for (std::string& h : header) h = trim(h);

    auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw DataError("'" + path + "': missing column '" + name + "'");
        }
        return static_cast<int>(it - header.begin());
    };
    const int id_col = column_index(schema.id);
    const int time_col = column_index(schema.time);
    const int y_col = column_index(schema.response);
    std::vector<int> x_cols;
    for (const std::string& c : schema.covariates) x_cols.push_back(column_index(c));

    struct RawRow {
        double time;
        double y;
        std::vector<double> x;
    };
    std::vector<std::string> order;
    std::map<std::string, std::vector<RawRow>> by_id;

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) < static_cast<int>(header.size())) {
            std::ostringstream os;
            os << "line " << line_no << ": expected " << header.size()
               << " fields, found " << fields.size();
            throw DataError(os.str());
        }
        const std::string id = trim(fields[static_cast<size_t>(id_col)]);
        if (id.empty()) {
            std::ostringstream os;
            os << "line " << line_no << ": empty id";
            throw DataError(os.str());
        }
        RawRow row;
        row.time = parse_double(fields[static_cast<size_t>(time_col)], line_no,
                                schema.time);
        row.y = parse_double(fields[static_cast<size_t>(y_col)], line_no,
                             schema.response);
        for (size_t c = 0; c < x_cols.size(); ++c) {
            row.x.push_back(parse_double(fields[static_cast<size_t>(x_cols[c])],
                                         line_no, schema.covariates[c]));
        }
        auto [it, inserted] = by_id.try_emplace(id);
        if (inserted) order.push_back(id);
        for (const RawRow& existing : it->second) {
            if (existing.time == row.time) {
                std::ostringstream os;
                os << "line " << line_no << ": duplicate time " << row.time
                   << " for id '" << id << "'";
                throw DataError(os.str());
            }
        }
        it->second.push_back(std::move(row));
    }
    if (order.empty()) {
        throw DataError("'" + path + "' contains no data rows");
    }

    LongitudinalDataset data;
    data.covariate_names = schema.covariates;
    for (const std::string& id : order) {
        std::vector<RawRow>& rows = by_id[id];
        std::sort(rows.begin(), rows.end(),
                  [](const RawRow& a, const RawRow& b) { return a.time < b.time; });
        Cluster c;
        c.id = id;
        const int ni = static_cast<int>(rows.size());
        c.y.resize(ni);
        c.x.resize(ni, static_cast<int>(schema.covariates.size()));
        for (int j = 0; j < ni; ++j) {
            c.times.push_back(rows[static_cast<size_t>(j)].time);
            c.y(j) = rows[static_cast<size_t>(j)].y;
            for (size_t k = 0; k < rows[static_cast<size_t>(j)].x.size(); ++k) {
                c.x(j, static_cast<int>(k)) = rows[static_cast<size_t>(j)].x[k];
            }
        }
        data.clusters.push_back(std::move(c));
    }
    data.validate();
    return data;
}

void write_dataset_csv(const std::string& path, const LongitudinalDataset& data,
                       const CsvSchema& schema) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    out << schema.id << "," << schema.time << "," << schema.response;
    for (const std::string& c : schema.covariates) out << "," << c;
    out << "\n";
    for (const Cluster& c : data.clusters) {
        for (int j = 0; j < c.size(); ++j) {
            out << c.id << "," << format_double(c.times[static_cast<size_t>(j)])
                << "," << format_double(c.y(j));
            for (int k = 0; k < c.x.cols(); ++k) {
                out << "," << format_double(c.x(j, k));
            }
            out << "\n";
        }
    }
}

void write_matrix_csv(const std::string& path,
                      const std::vector<std::string>& columns,
                      const Eigen::MatrixXd& values) {
    if (static_cast<int>(columns.size()) != values.cols()) {
        throw std::invalid_argument("write_matrix_csv: header length mismatch");
    }
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    for (size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << columns[c];
    }
    out << "\n";
    for (int i = 0; i < values.rows(); ++i) {
        for (int j = 0; j < values.cols(); ++j) {
            out << (j ? "," : "") << format_double(values(i, j));
        }
        out << "\n";
    }
}

} // namespace gsncop
