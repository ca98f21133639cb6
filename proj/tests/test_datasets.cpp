#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "unfold/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

using namespace unfold;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/unfold_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
    DatasetSpec spec;
    spec.name = DatasetName::swiss;
    spec.t = 50;
    spec.noise = 0.3;
    spec.seed = 7;
    const Matrix a = generate(spec);
    const Matrix b = generate(spec);
    CHECK(a == b);

    spec.seed = 8;
    CHECK((generate(spec) - a).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("the noiseless roll satisfies its defining equations") {
    DatasetSpec spec;
    spec.name = DatasetName::swiss;
    spec.t = 120;
    const Matrix x = generate(spec);
    REQUIRE(x.rows() == 120);
    REQUIRE(x.cols() == 3);
    for (Index i = 0; i < x.rows(); ++i) {
        const double theta = std::sqrt(x(i, 0) * x(i, 0) + x(i, 2) * x(i, 2));
        CHECK(theta >= 1.5 * M_PI - 1e-9);
        CHECK(theta <= 4.5 * M_PI + 1e-9);
        CHECK(x(i, 0) == doctest::Approx(theta * std::cos(theta)).epsilon(1e-9));
        CHECK(x(i, 2) == doctest::Approx(theta * std::sin(theta)).epsilon(1e-9));
        CHECK(x(i, 1) >= 0.0);
        CHECK(x(i, 1) <= 20.0);
    }
}

TEST_CASE("the noiseless sine sheet lies on its graph") {
    DatasetSpec spec;
    spec.name = DatasetName::sin3d;
    spec.t = 77;
    const Matrix x = generate(spec);
    REQUIRE(x.rows() == 77);
    REQUIRE(x.cols() == 3);
    for (Index i = 0; i < x.rows(); ++i) {
        CHECK(x(i, 2) == doctest::Approx(std::sin(x(i, 0))).epsilon(1e-12));
        CHECK(x(i, 0) >= 0.0);
        CHECK(x(i, 0) <= 2.0 * M_PI + 1e-12);
        CHECK(x(i, 1) >= 0.0);
        CHECK(x(i, 1) <= 2.0 + 1e-12);
    }
}

TEST_CASE("noise perturbs the surface by about its standard deviation") {
    DatasetSpec clean;
    clean.name = DatasetName::sin3d;
    clean.t = 40;
    clean.seed = 3;
    DatasetSpec noisy = clean;
    noisy.noise = 0.05;
    const Matrix a = generate(clean);
    const Matrix b = generate(noisy);
    CHECK((a - b).cwiseAbs().maxCoeff() > 0.0);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1.0);  // sigma = 0.05 stays small
}

TEST_CASE("CSV save and load round trip bitwise") {
    oracles::Rng rng(101);
    const Matrix m = oracles::random_matrix(rng, 9, 4, 3.0);
    TempFile f("roundtrip.csv");
    save_matrix(f.path, m);
    const Matrix back = load_matrix(f.path, MatrixKind::data);
    REQUIRE(back.rows() == 9);
    REQUIRE(back.cols() == 4);
    CHECK(back == m);
}

TEST_CASE("loading validates the declared matrix kind") {
    oracles::Rng rng(102);
    TempFile f("kinds.csv");

    save_matrix(f.path, oracles::random_edm_entries(rng, 6));
    CHECK_NOTHROW(load_matrix(f.path, MatrixKind::edm));

    save_matrix(f.path, oracles::random_matrix(rng, 6, 6, 1.0));
    CHECK_THROWS_AS(load_matrix(f.path, MatrixKind::edm), invalid_input);

    save_matrix(f.path, oracles::random_psd(rng, 5));
    CHECK_NOTHROW(load_matrix(f.path, MatrixKind::kernel));
}

TEST_CASE("parse errors name the offending cell") {
    TempFile f("bad.csv");

    write_text(f.path, "1.0,2.0\n3.0,oops\n");
    try {
        load_matrix(f.path, MatrixKind::data);
        FAIL("expected a parse error");
    } catch (const invalid_input& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("column 2") != std::string::npos);
    }

    write_text(f.path, "1.0,2.0\n3.0\n");
    try {
        load_matrix(f.path, MatrixKind::data);
        FAIL("expected a ragged-row error");
    } catch (const invalid_input& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }

    CHECK_THROWS_AS(load_matrix("/tmp/unfold_test_does_not_exist.csv", MatrixKind::data),
                    invalid_input);
}

TEST_CASE("blank lines and carriage returns are tolerated") {
    TempFile f("crlf.csv");
    write_text(f.path, "1.0,2.0\r\n\n3.0,4.0\r\n");
    const Matrix m = load_matrix(f.path, MatrixKind::data);
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 2);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(1, 1) == 4.0);
}

TEST_CASE("spec JSON round trip") {
    DatasetSpec spec;
    spec.name = DatasetName::sin3d;
    spec.t = 99;
    spec.noise = 0.25;
    spec.seed = 42;
    nlohmann::json j = spec;
    const DatasetSpec back = j.get<DatasetSpec>();
    CHECK(back.name == spec.name);
    CHECK(back.t == spec.t);
    CHECK(back.noise == spec.noise);
    CHECK(back.seed == spec.seed);

    DatasetSpec file_spec;
    file_spec.name = DatasetName::file;
    file_spec.path = "/tmp/somewhere.csv";
    nlohmann::json jf = file_spec;
    CHECK(jf.get<DatasetSpec>().path == file_spec.path);
}

TEST_CASE("spec validation") {
    DatasetSpec spec;
    spec.t = 3;
    CHECK_THROWS_AS(spec.check(), invalid_parameter);
    spec.t = 300;
    spec.noise = -0.1;
    CHECK_THROWS_AS(spec.check(), invalid_parameter);
    spec.noise = 0.0;
    CHECK_NOTHROW(spec.check());

    DatasetSpec file_spec;
    file_spec.name = DatasetName::file;
    CHECK_THROWS_AS(file_spec.check(), invalid_parameter);
    file_spec.path = "x.csv";
    CHECK_NOTHROW(file_spec.check());
}

TEST_CASE("name strings round trip") {
    for (DatasetName n : {DatasetName::swiss, DatasetName::sin3d, DatasetName::file})
        CHECK(dataset_name_parse(dataset_name_str(n)) == n);
    CHECK_THROWS_AS(dataset_name_parse("klein_bottle"), invalid_parameter);
}
