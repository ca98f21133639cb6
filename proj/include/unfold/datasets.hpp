#pragma once

#include "unfold/matgeo.hpp"

#include <cstdint>
#include <string>

#include <json.hpp>

namespace unfold {

enum class DatasetName { swiss, sin3d, file };

const char* dataset_name_str(DatasetName n);
DatasetName dataset_name_parse(const std::string& s);

// Synthetic manifolds used by the bench, or a user-supplied CSV.
struct DatasetSpec {
    DatasetName name = DatasetName::swiss;
    Index t = 300;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string path;  // file case

    void check() const;
};

void to_json(nlohmann::json& j, const DatasetSpec& s);
void from_json(const nlohmann::json& j, DatasetSpec& s);

// swiss: theta ~ U[1.5pi, 4.5pi], h ~ U[0, 20], point (theta cos theta, h, theta sin theta).
// sin3d: (x, y, sin x) on a uniform grid over [0, 2pi] x [0, 2].
// Gaussian noise (std = spec.noise) is added per coordinate; the RNG stream is
// fixed by the seed, so a spec maps to exactly one matrix.
Matrix generate(const DatasetSpec& spec);

// Header-free CSV, '.' decimal, one row per line. Values are printed with 17
// significant digits so a save/load round trip is exact.
Matrix load_matrix(const std::string& path, MatrixKind kind);
void save_matrix(const std::string& path, const Matrix& m);

}  // namespace unfold
