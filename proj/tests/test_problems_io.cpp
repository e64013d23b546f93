#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "esif/dense.hpp"
#include "esif/matrix_market.hpp"
#include "esif/problems.hpp"

using namespace esif;
using Catch::Matchers::WithinAbs;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& contents = "")
        : path(name) {
        if (!contents.empty()) {
            std::ofstream out(path, std::ios::binary);
            out << contents;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("model problem entries match the closed form", "[problems]") {
    const Matrix a = gen_example1(4);
    const double pi = std::numbers::pi;
    REQUIRE_THAT(a(0, 0), WithinAbs(pi / 20.0, 1e-15));
    REQUIRE_THAT(a(0, 1), WithinAbs(std::pow(2.0, 0.25) * pi / 20.8, 1e-15));
    REQUIRE_THAT(a(1, 1), WithinAbs(std::sqrt(2.0) * pi / 20.0, 1e-15));
    REQUIRE(a(0, 1) == a(1, 0));
    REQUIRE(a(0, 3) == a(3, 0));
    REQUIRE_THROWS_AS(gen_example1(1), ConfigError);
}

TEST_CASE("model problem is SPD at working sizes", "[problems]") {
    const Matrix a = gen_example1(64);
    REQUIRE_NOTHROW(cholesky(a));
}

TEST_CASE("radial kernels produce unit-diagonal Toeplitz matrices",
          "[problems]") {
    const Matrix g = gen_rbf(RbfKind::gaussian, 0.4, 5);
    REQUIRE(g(2, 2) == 1.0);
    REQUIRE_THAT(g(0, 1), WithinAbs(std::exp(-0.16), 1e-15));
    REQUIRE_THAT(g(0, 2), WithinAbs(std::exp(-0.64), 1e-15));
    REQUIRE(g(0, 1) == g(1, 2)); // Toeplitz
    REQUIRE(g(0, 1) == g(1, 0)); // symmetric

    const Matrix s = gen_rbf(RbfKind::sech, 0.2, 3);
    REQUIRE_THAT(s(0, 1), WithinAbs(0.980327997645, 1e-11));
    REQUIRE_THAT(s(0, 1), WithinAbs(1.0 / std::cosh(0.2), 1e-15));

    const Matrix imq = gen_rbf(RbfKind::inverse_multiquadric, 0.3, 3);
    REQUIRE_THAT(imq(0, 2), WithinAbs(1.0 / std::sqrt(1.36), 1e-15));

    const Matrix iq = gen_rbf(RbfKind::inverse_quadratic, 0.25, 3);
    REQUIRE_THAT(iq(0, 2), WithinAbs(1.0 / 1.25, 1e-15));

    REQUIRE_THROWS_AS(gen_rbf(RbfKind::gaussian, 0.0, 4), ConfigError);
    REQUIRE_THROWS_AS(gen_rbf(RbfKind::gaussian, 0.4, 1), ConfigError);
}

TEST_CASE("radial kernel matrices are SPD at modest sizes", "[problems]") {
    REQUIRE_NOTHROW(cholesky(gen_rbf(RbfKind::gaussian, 0.4, 96)));
    REQUIRE_NOTHROW(cholesky(gen_rbf(RbfKind::sech, 0.3, 96)));
    REQUIRE_NOTHROW(cholesky(gen_rbf(RbfKind::inverse_multiquadric, 0.3, 96)));
    REQUIRE_NOTHROW(cholesky(gen_rbf(RbfKind::inverse_quadratic, 0.25, 96)));
}

TEST_CASE("kernel cloud matrix: coincident points give the rank-one limit",
          "[problems]") {
    const std::array<double, 3> degenerate{0.0, 0.0, 0.0};
    const Matrix a = gen_gaussian_kernel(2, 1e-3, 2.5, degenerate, 1);
    REQUIRE_THAT(a(0, 0), WithinAbs(1.0 + 1e-3, 1e-15));
    REQUIRE_THAT(a(1, 1), WithinAbs(1.0 + 1e-3, 1e-15));
    REQUIRE_THAT(a(0, 1), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(a(1, 0), WithinAbs(1.0, 1e-15));
}

TEST_CASE("kernel cloud matrix is seeded and regularized", "[problems]") {
    const std::array<double, 3> box{100.0, 5.0, 5.0};
    const Matrix a = gen_gaussian_kernel(24, 1e-9, 2.5, box, 1);
    const Matrix b = gen_gaussian_kernel(24, 1e-9, 2.5, box, 1);
    REQUIRE(max_abs_diff(a, b) == 0.0);
    const Matrix c = gen_gaussian_kernel(24, 1e-9, 2.5, box, 2);
    REQUIRE(max_abs_diff(a, c) > 0.0);

    const Matrix sq = gen_gaussian_kernel(24, 1e-9, 2.5, box, 1, true);
    REQUIRE(max_abs_diff(a, sq) > 0.0); // distance vs squared distance

    REQUIRE_NOTHROW(cholesky(a));
    REQUIRE_THROWS_AS(gen_gaussian_kernel(24, -1.0, 2.5, box, 1), ConfigError);
    REQUIRE_THROWS_AS(gen_gaussian_kernel(24, 1e-9, 0.0, box, 1), ConfigError);
}

TEST_CASE("rhs_ones is the row-sum vector", "[problems]") {
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 3.0;
    const Vector b = rhs_ones(a);
    REQUIRE(b[0] == 3.0);
    REQUIRE(b[1] == 5.0);
}

TEST_CASE("generate dispatches on the problem kind", "[problems]") {
    ProblemSpec spec;
    spec.kind = ProblemKind::example1;
    spec.n = 8;
    REQUIRE(max_abs_diff(generate(spec), gen_example1(8)) == 0.0);

    spec.kind = ProblemKind::rbf;
    spec.rbf = RbfKind::sech;
    spec.eps = 0.3;
    REQUIRE(max_abs_diff(generate(spec), gen_rbf(RbfKind::sech, 0.3, 8)) == 0.0);

    REQUIRE(problem_label(spec) == "rbf:sech:eps=0.3");
    spec.kind = ProblemKind::example1;
    REQUIRE(problem_label(spec) == "example1");
    spec.kind = ProblemKind::matrix_market;
    spec.path = "/some/dir/case.mtx";
    REQUIRE(problem_label(spec) == "mm:case.mtx");
}

TEST_CASE("coordinate symmetric files read into dense symmetric storage",
          "[mm]") {
    const TempFile f("esif_mm_coord.mtx",
                     "%%MatrixMarket matrix coordinate real symmetric\n"
                     "% a comment line\n"
                     "2 2 3\n"
                     "1 1 2.0\n"
                     "2 1 1.0\n"
                     "2 2 2.0\n");
    const Matrix a = read_matrix_market(f.path);
    REQUIRE(a.rows() == 2);
    REQUIRE(a.cols() == 2);
    REQUIRE(a(0, 0) == 2.0);
    REQUIRE(a(1, 0) == 1.0);
    REQUIRE(a(0, 1) == 1.0);
    REQUIRE(a(1, 1) == 2.0);
}

TEST_CASE("coordinate duplicates are summed", "[mm]") {
    const TempFile f("esif_mm_dup.mtx",
                     "%%MatrixMarket matrix coordinate real symmetric\n"
                     "2 2 3\n"
                     "1 1 1.5\n"
                     "1 1 0.5\n"
                     "2 2 1.0\n");
    const Matrix a = read_matrix_market(f.path);
    REQUIRE(a(0, 0) == 2.0);
    REQUIRE(a(1, 1) == 1.0);
    REQUIRE(a(0, 1) == 0.0);
}

TEST_CASE("array general files are accepted when numerically symmetric",
          "[mm]") {
    const TempFile f("esif_mm_array.mtx",
                     "%%MatrixMarket matrix array real general\n"
                     "2 2\n"
                     "2.0\n1.0\n1.0\n3.0\n");
    const Matrix a = read_matrix_market(f.path);
    REQUIRE(a(0, 0) == 2.0);
    REQUIRE(a(0, 1) == 1.0);
    REQUIRE(a(1, 1) == 3.0);
}

TEST_CASE("array symmetric files carry the packed lower triangle", "[mm]") {
    const TempFile f("esif_mm_array_sym.mtx",
                     "%%MatrixMarket matrix array real symmetric\n"
                     "3 3\n"
                     "1.0\n2.0\n3.0\n4.0\n5.0\n6.0\n");
    const Matrix a = read_matrix_market(f.path);
    REQUIRE(a(0, 0) == 1.0);
    REQUIRE(a(1, 0) == 2.0);
    REQUIRE(a(2, 0) == 3.0);
    REQUIRE(a(1, 1) == 4.0);
    REQUIRE(a(2, 1) == 5.0);
    REQUIRE(a(2, 2) == 6.0);
    REQUIRE(a(0, 2) == a(2, 0));
}

TEST_CASE("malformed files raise ParseError with a line number", "[mm]") {
    SECTION("bad banner") {
        const TempFile f("esif_mm_bad1.mtx", "%%NotMatrixMarket nope\n1 1 1\n");
        try {
            read_matrix_market(f.path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            REQUIRE(e.line() == 1);
        }
    }
    SECTION("entry out of range") {
        const TempFile f("esif_mm_bad2.mtx",
                         "%%MatrixMarket matrix coordinate real symmetric\n"
                         "2 2 1\n"
                         "3 1 1.0\n");
        REQUIRE_THROWS_AS(read_matrix_market(f.path), ParseError);
    }
    SECTION("truncated data") {
        const TempFile f("esif_mm_bad3.mtx",
                         "%%MatrixMarket matrix coordinate real symmetric\n"
                         "2 2 2\n"
                         "1 1 1.0\n");
        REQUIRE_THROWS_AS(read_matrix_market(f.path), ParseError);
    }
    SECTION("missing file") {
        REQUIRE_THROWS_AS(read_matrix_market("esif_mm_nonexistent.mtx"),
                          ParseError);
    }
}

TEST_CASE("asymmetric general input is rejected", "[mm]") {
    const TempFile f("esif_mm_asym.mtx",
                     "%%MatrixMarket matrix array real general\n"
                     "2 2\n"
                     "1.0\n2.0\n5.0\n1.0\n");
    REQUIRE_THROWS_AS(read_matrix_market(f.path), NotSymmetric);
}

TEST_CASE("write then read round-trips values bitwise", "[mm]") {
    const Matrix a = gen_example1(16);
    const TempFile f("esif_mm_roundtrip.mtx");
    write_matrix_market(f.path, a);
    const Matrix b = read_matrix_market(f.path);
    REQUIRE(b.rows() == 16);
    REQUIRE(max_abs_diff(a, b) == 0.0);
}

TEST_CASE("written files are bitwise deterministic", "[mm]") {
    const Matrix a = gen_rbf(RbfKind::gaussian, 0.4, 12);
    const TempFile f1("esif_mm_det1.mtx");
    const TempFile f2("esif_mm_det2.mtx");
    write_matrix_market(f1.path, a);
    write_matrix_market(f2.path, a);
    std::ifstream in1(f1.path, std::ios::binary), in2(f2.path, std::ios::binary);
    const std::string s1((std::istreambuf_iterator<char>(in1)),
                         std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(in2)),
                         std::istreambuf_iterator<char>());
    REQUIRE(!s1.empty());
    REQUIRE(s1 == s2);
}
