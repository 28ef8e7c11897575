#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "signet/protocol.hpp"
#include "signet/rng.hpp"

using namespace signet;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent spelling of the seven-term reference excitation.
double reference_pe(double t) {
    return 0.5 * std::sin(15 * kPi * t) + 0.3 * std::cos(6 * kPi * t) -
           0.5 * std::sin(8 * kPi * t) + 0.7 * std::cos(12 * kPi * t) + 2.0 * std::sin(kPi * t) -
           0.3 * std::cos(2 * kPi * t) - 0.8 * std::sin(18 * kPi * t);
}

}  // namespace

TEST_CASE("reference excitation signal", "[protocol]") {
    const SignalConfig cfg = SignalConfig::defaults();
    REQUIRE(cfg.kappa == 1000.0);
    REQUIRE(cfg.pe_terms.size() == 7);

    SECTION("value at t = 0 is the cosine amplitude sum") {
        REQUIRE(pe_signal(0.0, cfg) == Catch::Approx(0.7).margin(1e-12));
    }

    SECTION("matches an independently written formula on a grid") {
        for (int i = 0; i <= 400; ++i) {
            const double t = 0.005 * i;
            REQUIRE(pe_signal(t, cfg) == Catch::Approx(reference_pe(t)).margin(1e-12));
        }
    }

    SECTION("amplitude bound") {
        REQUIRE(cfg.bound() == Catch::Approx(5.1).margin(1e-12));
        for (int i = 0; i <= 2000; ++i)
            REQUIRE(std::abs(pe_signal(0.01 * i, cfg)) <= cfg.bound() + 1e-12);
    }
}

TEST_CASE("generator phi is bounded and vanishes with its state argument", "[protocol]") {
    const SignalConfig cfg = SignalConfig::defaults();

    const Vec zero(5, 0.0);
    REQUIRE(norm_inf(phi_theta(0.3, zero, cfg)) == 0.0);

    Rng rng(11);
    for (int rep = 0; rep < 100; ++rep) {
        const double t = rng.uniform(0.0, 10.0);
        Vec x(4);
        for (auto& v : x) v = rng.uniform(-3.0, 3.0);
        const Vec phi = phi_theta(t, x, cfg);
        REQUIRE(phi.size() == x.size());
        const double pe = pe_signal(t, cfg);
        for (std::size_t i = 0; i < x.size(); ++i) {
            REQUIRE(std::abs(phi[i]) <= cfg.bound() + 1e-12);
            REQUIRE(phi[i] == Catch::Approx(std::tanh(cfg.kappa * x[i]) * pe).margin(1e-14));
        }
    }

    // At the reference steepness the generator saturates to sign(x) * pe.
    const Vec x{0.5, -0.5};
    const Vec phi = phi_theta(0.1, x, cfg);
    const double pe = pe_signal(0.1, cfg);
    REQUIRE(phi[0] == Catch::Approx(pe).margin(1e-9 * std::abs(pe)));
    REQUIRE(phi[1] == Catch::Approx(-pe).margin(1e-9 * std::abs(pe)));
}

TEST_CASE("required gain per mode", "[protocol]") {
    REQUIRE(required_gain(GainMode::prop1, -2.5, 4) == Catch::Approx(2.5));
    REQUIRE(required_gain(GainMode::prop2, std::nullopt, 12) == 12.0);
    REQUIRE_THROWS_AS(required_gain(GainMode::prop1, std::nullopt, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(required_gain(GainMode::prop2, std::nullopt, 0), std::invalid_argument);
}

TEST_CASE("edge maps are adjoint", "[protocol]") {
    const IncidenceMatrix e = build_complete_incidence(5);
    Rng rng(3);
    for (int rep = 0; rep < 25; ++rep) {
        Vec v(5), w(static_cast<std::size_t>(e.n_edges()));
        for (auto& x : v) x = rng.uniform(-1.0, 1.0);
        for (auto& x : w) x = rng.uniform(-1.0, 1.0);
        const double lhs = dot(edge_differences(e, v), w);
        const double rhs = dot(v, node_from_edges(e, w));
        REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
    }

    // Slot k of E^T v is v_i - v_j for the slot's pair.
    const Vec v{1.0, 4.0, 9.0, 16.0, 25.0};
    const Vec d = edge_differences(e, v);
    for (int k = 1; k <= e.n_edges(); ++k) {
        const auto [i, j] = edge_pair(k, 5);
        REQUIRE(d[k - 1] == Catch::Approx(v[i - 1] - v[j - 1]).margin(1e-15));
    }
}

TEST_CASE("auxiliary dynamics relax toward the generator", "[protocol]") {
    ProtocolState st;
    st.x = {0.0, 0.0};
    st.x_hat = {2.0, -1.0};
    st.w_hat = {0.0};
    const Vec rhs = auxiliary_rhs(st, {0.5, 0.5});
    REQUIRE(rhs[0] == Catch::Approx(-1.5).margin(1e-15));
    REQUIRE(rhs[1] == Catch::Approx(1.5).margin(1e-15));
    REQUIRE_THROWS_AS(auxiliary_rhs(st, Vec{1.0}), std::invalid_argument);
}

TEST_CASE("control input hand oracle on a coupled pair", "[protocol]") {
    const IncidenceMatrix e = build_complete_incidence(2);
    ProtocolState st;
    st.x = {1.0, 2.0};
    st.x_hat = {0.5, 1.0};
    st.w_hat = {2.0};
    const Vec xhat_dot{0.1, 0.2};
    const Vec f_vals{0.0, 0.0};
    GainConfig gains;
    gains.c1 = 3.0;

    // u = -f - c1 (x - x_hat) + xhat_dot + E diag(w_hat) E^T x_hat
    //   = (-1.5 + 0.1 - 1, -3 + 0.2 + 1) = (-2.4, -1.8)
    const Vec u = control_input(st, xhat_dot, f_vals, gains, e);
    REQUIRE(u[0] == Catch::Approx(-2.4).margin(1e-12));
    REQUIRE(u[1] == Catch::Approx(-1.8).margin(1e-12));

    st.w_hat = {2.0, 0.0};
    REQUIRE_THROWS_AS(control_input(st, xhat_dot, f_vals, gains, e), std::invalid_argument);
}

TEST_CASE("weight update hand oracle on a coupled pair", "[protocol]") {
    const IncidenceMatrix e = build_complete_incidence(2);
    ProtocolState st;
    st.x = {1.0, 2.0};
    st.x_hat = {0.5, 1.0};
    st.w_hat = {0.0};

    // z = x_hat_1 - x_hat_2 = -0.5, edge diff of x - x_hat is -0.5,
    // so dw = -z * diff = -0.25.
    const Vec dw = weight_update_rhs(st, e);
    REQUIRE(dw.size() == 1);
    REQUIRE(dw[0] == Catch::Approx(-0.25).margin(1e-12));
}
