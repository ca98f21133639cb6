#include "unfold/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace unfold {

const char* dataset_name_str(DatasetName n) {
    switch (n) {
        case DatasetName::swiss: return "swiss";
        case DatasetName::sin3d: return "sin3d";
        case DatasetName::file: return "file";
    }
    return "?";
}

DatasetName dataset_name_parse(const std::string& s) {
    if (s == "swiss") return DatasetName::swiss;
    if (s == "sin3d") return DatasetName::sin3d;
    if (s == "file") return DatasetName::file;
    throw invalid_parameter("unknown dataset name '" + s + "'");
}

void DatasetSpec::check() const {
    if (name != DatasetName::file && t < 4) throw invalid_parameter("dataset needs t >= 4");
    if (noise < 0.0) throw invalid_parameter("noise std must be >= 0");
    if (name == DatasetName::file && path.empty())
        throw invalid_parameter("file dataset needs a path");
}

void to_json(nlohmann::json& j, const DatasetSpec& s) {
    j = nlohmann::json{{"name", dataset_name_str(s.name)},
                       {"t", s.t},
                       {"noise", s.noise},
                       {"seed", s.seed},
                       {"path", s.path}};
}

void from_json(const nlohmann::json& j, DatasetSpec& s) {
    s.name = dataset_name_parse(j.at("name").get<std::string>());
    if (j.contains("t")) s.t = j.at("t").get<Index>();
    if (j.contains("noise")) s.noise = j.at("noise").get<double>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("path")) s.path = j.at("path").get<std::string>();
}

Matrix generate(const DatasetSpec& spec) {
    spec.check();
    if (spec.name == DatasetName::file) return load_matrix(spec.path, MatrixKind::data);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix x(spec.t, 3);

    if (spec.name == DatasetName::swiss) {
        const double pi = std::acos(-1.0);
        std::uniform_real_distribution<double> u_theta(1.5 * pi, 4.5 * pi);
        std::uniform_real_distribution<double> u_h(0.0, 20.0);
        for (Index i = 0; i < spec.t; ++i) {
            const double theta = u_theta(rng);
            const double h = u_h(rng);
            x(i, 0) = theta * std::cos(theta);
            x(i, 1) = h;
            x(i, 2) = theta * std::sin(theta);
        }
    } else {
        const double pi = std::acos(-1.0);
        const Index nx = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(spec.t))));
        const Index ny = (spec.t + nx - 1) / nx;
        for (Index i = 0; i < spec.t; ++i) {
            const Index ix = i % nx;
            const Index iy = i / nx;
            const double gx = nx > 1 ? 2.0 * pi * static_cast<double>(ix) / static_cast<double>(nx - 1) : 0.0;
            const double gy = ny > 1 ? 2.0 * static_cast<double>(iy) / static_cast<double>(ny - 1) : 0.0;
            x(i, 0) = gx;
            x(i, 1) = gy;
            x(i, 2) = std::sin(gx);
        }
    }
    // draw unconditionally so the stream layout is independent of the noise level
    for (Index i = 0; i < spec.t; ++i)
        for (Index c = 0; c < 3; ++c) x(i, c) += spec.noise * gauss(rng);
    return x;
}

Matrix load_matrix(const std::string& path, MatrixKind kind) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open '" + path + "' for reading");

    std::vector<std::vector<double>> rows;
    std::string line;
    Index lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        Index col = 0;
        while (true) {
            ++col;
            const std::size_t comma = line.find(',', pos);
            const std::string cell =
                line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') {
                std::ostringstream os;
                os << "parse failure in '" << path << "' at row " << lineno << ", column " << col
                   << ": '" << cell << "' is not a number";
                throw invalid_input(os.str());
            }
            row.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            std::ostringstream os;
            os << "ragged CSV in '" << path << "': row " << lineno << " has " << row.size()
               << " columns, expected " << rows.front().size();
            throw invalid_input(os.str());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw invalid_input("'" + path + "' holds no numeric rows");

    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

    if (kind != MatrixKind::data) {
        const ValidationReport rep = validate(m, kind);
        if (!rep.ok())
            throw invalid_input("'" + path + "' fails " + std::string(matrix_kind_name(kind)) +
                                " validation: " + rep.summary());
    }
    return m;
}

void save_matrix(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot open '" + path + "' for writing");
    char buf[64];
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw invalid_input("write failure on '" + path + "'");
}

}  // namespace unfold
