#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "chebbvp/chebyshev.hpp"
#include "oracles.hpp"

using namespace chebbvp;

namespace {

double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

}  // namespace

TEST_CASE("gauss_lobatto_nodes basic grids") {
    const auto x4 = gauss_lobatto_nodes(4);
    REQUIRE(x4.size() == 5);
    CHECK(x4[0] == 1.0);
    CHECK(x4[1] == Catch::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(x4[2] == 0.0);
    CHECK(x4[3] == -x4[1]);
    CHECK(x4[4] == -1.0);

    const auto x1 = gauss_lobatto_nodes(1);
    REQUIRE(x1.size() == 2);
    CHECK(x1[0] == 1.0);
    CHECK(x1[1] == -1.0);
}

TEST_CASE("gauss_lobatto_nodes are strictly decreasing and antisymmetric") {
    for (int n : {2, 3, 7, 16, 33, 64}) {
        const auto x = gauss_lobatto_nodes(n);
        for (std::size_t k = 1; k < x.size(); ++k) CHECK(x[k] < x[k - 1]);
        for (int k = 0; k <= n; ++k) CHECK(x[k] == -x[n - k]);
        if (n % 2 == 0) CHECK(x[n / 2] == 0.0);
    }
}

TEST_CASE("gauss_lobatto_nodes rejects degree below 1") {
    CHECK_THROWS_AS(gauss_lobatto_nodes(0), InvalidDegree);
    CHECK_THROWS_AS(gauss_lobatto_nodes(-3), InvalidDegree);
}

TEST_CASE("cheb_roots known values") {
    const auto r3 = cheb_roots(3);
    REQUIRE(r3.size() == 3);
    CHECK(r3[0] == Catch::Approx(0.8660254037844387).epsilon(1e-15));
    CHECK(r3[1] == 0.0);
    CHECK(r3[2] == -r3[0]);

    const auto r1 = cheb_roots(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == 0.0);

    CHECK_THROWS_AS(cheb_roots(0), InvalidDegree);
}

TEST_CASE("cheb_roots annihilate their polynomial") {
    for (int n : {2, 5, 12, 40}) {
        const auto r = cheb_roots(n);
        REQUIRE(static_cast<int>(r.size()) == n);
        for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[k] < r[k - 1]);
        for (double t : r) CHECK(std::abs(cheb_T(n, t)) < 1e-13);
    }
}

TEST_CASE("cheb_T known values and domain handling") {
    CHECK(cheb_T(0, 0.3) == 1.0);
    CHECK(cheb_T(1, 0.3) == 0.3);
    CHECK(cheb_T(3, 0.5) == -1.0);
    CHECK(cheb_T(2, -1.0) == 1.0);
    CHECK(cheb_T(5, 1.0) == 1.0);
    CHECK(cheb_T(5, 1.0 + 1e-15) == 1.0);
    CHECK_THROWS_AS(cheb_T(5, 1.0 + 1e-12), DomainError);
    CHECK_THROWS_AS(cheb_T(5, -1.1), DomainError);
    CHECK_THROWS_AS(cheb_T(-1, 0.0), InvalidDegree);
}

TEST_CASE("cheb_T matches the trigonometric identity on grid nodes") {
    for (int degree : {4, 9, 16, 31, 64}) {
        const auto x = gauss_lobatto_nodes(degree);
        for (int n = 0; n <= degree; ++n)
            for (int k = 0; k <= degree; ++k)
                CHECK(std::abs(cheb_T(n, x[k]) - oracle::t_at_node(n, k, degree)) <
                      1e-11);
    }
}

TEST_CASE("cheb_deriv_series low-order hand checks") {
    const auto d1t1 = cheb_deriv_series(1, 1);
    REQUIRE(d1t1.coeffs == std::vector<double>{1.0});

    const auto d1t2 = cheb_deriv_series(2, 1);
    REQUIRE(d1t2.coeffs == std::vector<double>{0.0, 4.0});

    const auto d2t2 = cheb_deriv_series(2, 2);
    REQUIRE(d2t2.coeffs == std::vector<double>{4.0});

    const auto d3t4 = cheb_deriv_series(4, 3);
    REQUIRE(d3t4.coeffs == std::vector<double>{0.0, 192.0});

    const auto empty = cheb_deriv_series(2, 3);
    CHECK(empty.coeffs.empty());

    CHECK_THROWS_AS(cheb_deriv_series(-1, 1), InvalidDegree);
    CHECK_THROWS_AS(cheb_deriv_series(4, 0), InvalidOrder);
}

TEST_CASE("cheb_deriv_series agrees with explicit 3rd/4th/5th derivative forms") {
    for (int n = 0; n <= 20; ++n) {
        const auto d3 = cheb_deriv_series(n, 3);
        const auto o3 = oracle::third_deriv_series(n);
        REQUIRE(d3.coeffs.size() == o3.size());
        for (std::size_t l = 0; l < o3.size(); ++l)
            CHECK(std::abs(d3.coeffs[l] - o3[l]) <=
                  1e-12 * std::max(1.0, std::abs(o3[l])));

        const auto d4 = cheb_deriv_series(n, 4);
        const auto o4 = oracle::fourth_deriv_series(n);
        REQUIRE(d4.coeffs.size() == o4.size());
        for (std::size_t l = 0; l < o4.size(); ++l)
            CHECK(std::abs(d4.coeffs[l] - o4[l]) <=
                  1e-12 * std::max(1.0, std::abs(o4[l])));

        const auto d5 = cheb_deriv_series(n, 5);
        const auto o5 = oracle::fifth_deriv_series(n);
        REQUIRE(d5.coeffs.size() == o5.size());
        for (std::size_t l = 0; l < o5.size(); ++l)
            CHECK(std::abs(d5.coeffs[l] - o5[l]) <=
                  1e-12 * std::max(1.0, std::abs(o5[l])));
    }
}

TEST_CASE("derivative of the antiderivative recovers T_n") {
    // e_n = T_{n+1} / (2(n+1)) - T_{n-1} / (2(n-1)) has derivative T_n.
    for (int n = 2; n <= 20; ++n) {
        std::vector<double> expanded(n + 1, 0.0);
        const auto hi = cheb_deriv_series(n + 1, 1);
        for (std::size_t l = 0; l < hi.coeffs.size(); ++l)
            expanded[l] += hi.coeffs[l] / (2.0 * (n + 1));
        const auto lo = cheb_deriv_series(n - 1, 1);
        for (std::size_t l = 0; l < lo.coeffs.size(); ++l)
            expanded[l] -= lo.coeffs[l] / (2.0 * (n - 1));
        for (int l = 0; l <= n; ++l) {
            const double want = (l == n) ? 1.0 : 0.0;
            CHECK(std::abs(expanded[l] - want) <= 1e-12);
        }
    }
}

TEST_CASE("diff_matrix first-derivative matrix for degree 2") {
    const auto d = diff_matrix(2, 1);
    REQUIRE(d.size() == 3);
    const double want[3][3] = {{1.5, -2.0, 0.5}, {0.5, 0.0, -0.5}, {-0.5, 2.0, -1.5}};
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(d(k, j) - want[k][j]) < 1e-14);
}

TEST_CASE("diff_matrix input validation") {
    CHECK_THROWS_AS(diff_matrix(0, 1), InvalidDegree);
    CHECK_THROWS_AS(diff_matrix(4, 0), InvalidOrder);
    CHECK_THROWS_AS(diff_matrix(4, 5), InvalidOrder);
}

TEST_CASE("diff_matrix matches the classical first/second derivative forms") {
    for (int degree : {2, 5, 8, 13}) {
        const auto d1 = diff_matrix(degree, 1);
        const auto o1 = oracle::first_deriv_matrix(degree);
        double scale = 0.0;
        for (int k = 0; k <= degree; ++k)
            for (int j = 0; j <= degree; ++j)
                scale = std::max(scale, std::abs(o1[k][j]));
        for (int k = 0; k <= degree; ++k)
            for (int j = 0; j <= degree; ++j)
                CHECK(std::abs(d1(k, j) - o1[k][j]) <= 1e-12 * scale);

        if (degree < 2) continue;
        const auto d2 = diff_matrix(degree, 2);
        const auto o2 = oracle::second_deriv_matrix(degree);
        scale = 0.0;
        for (int k = 0; k <= degree; ++k)
            for (int j = 0; j <= degree; ++j)
                scale = std::max(scale, std::abs(o2[k][j]));
        for (int k = 0; k <= degree; ++k)
            for (int j = 0; j <= degree; ++j)
                CHECK(std::abs(d2(k, j) - o2[k][j]) <= 1e-12 * scale);
    }
}

TEST_CASE("diff_matrix differentiates monomials exactly") {
    for (int degree : {6, 11, 16}) {
        const auto x = gauss_lobatto_nodes(degree);
        for (int m : {1, 2, 3, 5}) {
            if (m > degree) continue;
            const auto d = diff_matrix(degree, m);
            for (int q : {0, 1, m, degree / 2, degree}) {
                std::vector<double> samples(degree + 1);
                double vmax = 0.0;
                for (int k = 0; k <= degree; ++k) {
                    samples[k] = std::pow(x[k], q);
                    vmax = std::max(vmax, std::abs(samples[k]));
                }
                const auto dv = apply_diff(d, samples);
                for (int k = 0; k <= degree; ++k) {
                    double rowsum = 0.0;
                    for (int j = 0; j <= degree; ++j) rowsum += std::abs(d(k, j));
                    double want = 0.0;
                    if (q >= m) {
                        double f = 1.0;
                        for (int i = q; i > q - m; --i) f *= i;
                        want = f * std::pow(x[k], q - m);
                    }
                    CHECK(std::abs(dv[k] - want) <= 1e-12 * rowsum * std::max(1.0, vmax));
                }
            }
        }
    }
}

TEST_CASE("apply_diff validates dimensions") {
    const auto d = diff_matrix(4, 1);
    std::vector<double> bad(4, 1.0);
    CHECK_THROWS_AS(apply_diff(d, bad), ShapeError);
}

TEST_CASE("cheb_coeffs known transforms") {
    const std::vector<double> ones(5, 1.0);
    const auto s1 = cheb_coeffs(ones);
    REQUIRE(s1.degree == 4);
    CHECK(std::abs(s1.a[0] - 2.0) < 1e-14);
    for (int n = 1; n <= 4; ++n) CHECK(std::abs(s1.a[n]) < 1e-14);

    const auto x4 = gauss_lobatto_nodes(4);
    std::vector<double> t2(5);
    for (int k = 0; k <= 4; ++k) t2[k] = cheb_T(2, x4[k]);
    const auto s2 = cheb_coeffs(t2);
    for (int n = 0; n <= 4; ++n) {
        const double want = (n == 2) ? 1.0 : 0.0;
        CHECK(std::abs(s2.a[n] - want) < 1e-14);
    }

    const auto x3 = gauss_lobatto_nodes(3);
    const auto s3 = cheb_coeffs(x3);
    CHECK(std::abs(s3.a[1] - 1.0) < 1e-14);
    CHECK(std::abs(s3.a[0]) < 1e-14);
    CHECK(std::abs(s3.a[2]) < 1e-14);
    CHECK(std::abs(s3.a[3]) < 1e-14);

    const std::vector<double> single{1.0};
    CHECK_THROWS_AS(cheb_coeffs(single), InvalidDegree);
    CHECK_THROWS_AS(cheb_coeffs(std::vector<double>{}), InvalidDegree);
}

TEST_CASE("series_eval interpolates the samples") {
    std::mt19937 rng(811);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int degree : {1, 2, 7, 20}) {
        const auto x = gauss_lobatto_nodes(degree);
        std::vector<double> v(degree + 1);
        for (auto& e : v) e = uni(rng);
        const auto s = cheb_coeffs(v);
        for (int k = 0; k <= degree; ++k)
            CHECK(std::abs(series_eval(s, x[k]) - v[k]) < 1e-12);
    }
}

TEST_CASE("series_eval rejects arguments outside the domain") {
    const std::vector<double> v{1.0, 2.0, 3.0};
    const auto s = cheb_coeffs(v);
    CHECK_NOTHROW(series_eval(s, 1.0 + 5e-15));
    CHECK_THROWS_AS(series_eval(s, 1.0 + 1e-12), DomainError);
    CHECK_THROWS_AS(series_eval(s, -1.5), DomainError);
}

TEST_CASE("series_derivative reproduces polynomial derivatives") {
    const int degree = 6;
    const auto x = gauss_lobatto_nodes(degree);
    std::vector<double> v(degree + 1);
    for (int k = 0; k <= degree; ++k) v[k] = x[k] * x[k] * x[k];
    const auto s = cheb_coeffs(v);

    const auto d1 = series_derivative(s, 1);
    const auto d2 = series_derivative(s, 2);
    const auto d3 = series_derivative(s, 3);
    const auto d4 = series_derivative(s, 4);
    for (double t : {-0.93, -0.4, 0.0, 0.27, 0.88}) {
        CHECK(std::abs(eval_plain(d1, t) - 3.0 * t * t) < 1e-13);
        CHECK(std::abs(eval_plain(d2, t) - 6.0 * t) < 1e-13);
        CHECK(std::abs(eval_plain(d3, t) - 6.0) < 1e-12);
        CHECK(std::abs(eval_plain(d4, t)) < 1e-12);
    }
    CHECK(series_derivative(s, 7).empty());
    CHECK_THROWS_AS(series_derivative(s, 0), InvalidOrder);
}

TEST_CASE("series_to_monomial known expansion and conditioning guard") {
    const auto x4 = gauss_lobatto_nodes(4);
    std::vector<double> t2(5);
    for (int k = 0; k <= 4; ++k) t2[k] = cheb_T(2, x4[k]);
    const auto mono = series_to_monomial(cheb_coeffs(t2));
    REQUIRE(mono.size() == 5);
    CHECK(std::abs(mono[0] + 1.0) < 1e-13);
    CHECK(std::abs(mono[1]) < 1e-13);
    CHECK(std::abs(mono[2] - 2.0) < 1e-13);
    CHECK(std::abs(mono[3]) < 1e-13);
    CHECK(std::abs(mono[4]) < 1e-13);

    ChebSeries big{31, std::vector<double>(32, 0.0)};
    CHECK_THROWS_AS(series_to_monomial(big), ConditioningError);
}

TEST_CASE("series_to_monomial round-trips against direct evaluation") {
    std::mt19937 rng(1902);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int degree : {3, 8, 12}) {
        std::vector<double> v(degree + 1);
        for (auto& e : v) e = uni(rng);
        const auto s = cheb_coeffs(v);
        const auto mono = series_to_monomial(s);
        for (int i = 0; i < 20; ++i) {
            const double t = uni(rng);
            CHECK(std::abs(horner(mono, t) - series_eval(s, t)) < 1e-10);
        }
    }
}

TEST_CASE("compose_affine shifts and scales polynomials") {
    // p = x^2, composed with 2x + 1: (2x + 1)^2 = 1 + 4x + 4x^2.
    const std::vector<double> p{0.0, 0.0, 1.0};
    const auto q = compose_affine(p, 2.0, 1.0);
    REQUIRE(q.size() == 3);
    CHECK(q[0] == Catch::Approx(1.0));
    CHECK(q[1] == Catch::Approx(4.0));
    CHECK(q[2] == Catch::Approx(4.0));

    const std::vector<double> c{7.5};
    const auto qc = compose_affine(c, 3.0, -2.0);
    REQUIRE(qc.size() == 1);
    CHECK(qc[0] == 7.5);
}
