#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include <modfold/certificates.hpp>
#include <modfold/enumerate.hpp>
#include <modfold/lll.hpp>

using namespace modfold;

namespace {

long long int_det(const std::vector<std::vector<long long>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    long long det = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c] == 0) continue;
        std::vector<std::vector<long long>> minor(n - 1, std::vector<long long>(n - 1));
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t jj = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == c) continue;
                minor[i - 1][jj++] = m[i][j];
            }
        }
        long long term = m[0][c] * int_det(minor);
        det += (c % 2 == 0) ? term : -term;
    }
    return det;
}

double brute_min_form(const Mat& Q, long long bound) {
    const std::size_t n = Q.rows;
    std::vector<long long> v(n, -bound);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        bool zero = true;
        for (long long x : v)
            if (x != 0) { zero = false; break; }
        if (!zero) best = std::min(best, detail::form_value(Q, v));
        std::size_t pos = n;
        while (pos-- > 0) {
            if (v[pos] < bound) {
                ++v[pos];
                break;
            }
            v[pos] = -bound;
            if (pos == 0) return best;
        }
    }
}

}

TEST_CASE("LLL on the identity form returns a unit vector") {
    Mat Q(4, 4);
    for (std::size_t i = 0; i < 4; ++i) Q(i, i) = 1.0;
    LLLResult res = lll_reduce(Q);
    CHECK(res.shortest_form == Catch::Approx(1.0).margin(1e-12));
    int nonzeros = 0;
    for (long long x : res.shortest)
        if (x != 0) ++nonzeros;
    CHECK(nonzeros == 1);
    CHECK(res.swaps == 0);
}

TEST_CASE("LLL finds the difference vector of a correlated pair") {
    Mat Q(2, 2);
    Q(0, 0) = 1.0;
    Q(1, 1) = 1.0;
    Q(0, 1) = 0.9;
    Q(1, 0) = 0.9;
    LLLResult res = lll_reduce(Q);
    CHECK(res.shortest_form == Catch::Approx(0.2).margin(1e-12));
    CHECK(std::llabs(res.shortest[0]) == 1);
    CHECK(res.shortest[0] + res.shortest[1] == 0);
}

TEST_CASE("LLL reports a consistent form value and a unimodular basis") {
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = 4;
        Mat R(n, n);
        for (std::size_t i = 0; i < n * n; ++i) R.a[i] = static_cast<double>(coef(rng));
        Mat Q(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = (i == j) ? 1.0 : 0.0;
                for (std::size_t k = 0; k < n; ++k) s += R(k, i) * R(k, j);
                Q(i, j) = s;
            }
        LLLResult res = lll_reduce(Q);
        REQUIRE(res.shortest_form ==
                Catch::Approx(detail::form_value(Q, res.shortest)).margin(1e-9));
        REQUIRE(std::llabs(int_det(res.basis)) == 1);
    }
}

TEST_CASE("box enumeration matches an exhaustive scan") {
    std::mt19937_64 rng(89);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 4;
        Mat R(n, n);
        for (std::size_t i = 0; i < n * n; ++i) R.a[i] = static_cast<double>(coef(rng));
        Mat Q(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = (i == j) ? 1.0 : 0.0;
                for (std::size_t k = 0; k < n; ++k) s += R(k, i) * R(k, j);
                Q(i, j) = s;
            }
        double truth = brute_min_form(Q, 2);
        EnumerationResult enu = enumerate_box(Q, 2, 1e18);
        REQUIRE_FALSE(enu.best.empty());
        REQUIRE(enu.best_form == Catch::Approx(truth).epsilon(1e-9));
        REQUIRE(detail::form_value(Q, enu.best) == Catch::Approx(enu.best_form).margin(1e-9));
    }
}

TEST_CASE("enumeration sweeps levels whose center sits outside the box") {
    Mat Q(2, 2);
    Q(0, 0) = 1.0;
    Q(0, 1) = 2.9;
    Q(1, 0) = 2.9;
    Q(1, 1) = 9.0;
    double truth = brute_min_form(Q, 3);
    EnumerationResult enu = enumerate_box(Q, 3, 1e18);
    REQUIRE(truth == Catch::Approx(0.6).margin(1e-12));
    REQUIRE_FALSE(enu.best.empty());
    REQUIRE(enu.best_form == Catch::Approx(truth).margin(1e-9));
}

TEST_CASE("an optimal incumbent is never displaced") {
    Mat Q(3, 3);
    for (std::size_t i = 0; i < 3; ++i) Q(i, i) = 1.0;
    double truth = brute_min_form(Q, 3);
    REQUIRE(truth == 1.0);
    EnumerationResult enu = enumerate_box(Q, 3, truth);
    CHECK(enu.best.empty());
    CHECK(enu.best_form == truth);
}

TEST_CASE("shortest-vector certificates dominate the explicit constructions") {
    for (double alpha : {0.6, 0.7, 0.8}) {
        for (std::size_t N : {2u, 4u, 6u, 8u}) {
            IntegerCertificate bf = svp_certificate(alpha, N, svp_bruteforce(3));
            IntegerCertificate red = svp_certificate(alpha, N, svp_lll());
            REQUIRE(bf.construction == "svp_bruteforce");
            REQUIRE(red.construction == "svp_lll");
            REQUIRE(bf.coeffs.size() <= N);
            double binom = binomial_certificate(N - 1, alpha).residual;
            CHECK(bf.residual <= binom * (1.0 + 1e-6) + 1e-9);
            double factor = std::pow(2.0, (static_cast<double>(N) - 1.0) / 2.0);
            CHECK(red.residual <= factor * bf.residual * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("order-one certificate is the unit vector") {
    IntegerCertificate cert = svp_certificate(0.5, 1, svp_bruteforce(3));
    REQUIRE(cert.coeffs == std::vector<long long>{1});
    CHECK(cert.residual == Catch::Approx(std::sqrt(0.5)).margin(1e-12));
}

TEST_CASE("lattice argument validation") {
    Mat rect(2, 3);
    REQUIRE_THROWS_AS(lll_reduce(rect), usage_error);
    Mat Q(2, 2);
    Q(0, 0) = 1.0;
    Q(1, 1) = 1.0;
    REQUIRE_THROWS_AS(lll_reduce(Q, 0.2), usage_error);
    REQUIRE_THROWS_AS(lll_reduce(Q, 1.0), usage_error);
    REQUIRE_THROWS_AS(enumerate_box(Q, 0, 1.0), usage_error);
    REQUIRE_THROWS_AS(enumerate_box(rect, 2, 1.0), usage_error);
    Mat indef(2, 2);
    indef(0, 0) = 1.0;
    indef(0, 1) = 2.0;
    indef(1, 0) = 2.0;
    indef(1, 1) = 1.0;
    REQUIRE_THROWS_AS(enumerate_box(indef, 2, 1.0), numerical_error);
    REQUIRE_THROWS_AS(svp_certificate(0.5, 0, svp_bruteforce(3)), usage_error);
    REQUIRE_THROWS_AS(svp_certificate(0.5, 15, svp_bruteforce(3)), usage_error);
    REQUIRE_THROWS_AS(svp_certificate(0.5, 4, svp_bruteforce(4)), usage_error);
    REQUIRE_THROWS_AS(svp_certificate(1.5, 4, svp_bruteforce(3)), usage_error);
}
