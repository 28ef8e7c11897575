#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "signet/cross_validate.hpp"
#include "signet/csv.hpp"
#include "signet/integrate.hpp"
#include "signet/sim.hpp"

#include <cstdio>
#include <filesystem>
#include <string>

using namespace signet;

namespace {

SimConfig triangle_config() {
    SignedGraph g(3, {{1, 2, 0.8}, {1, 3, -0.5}, {2, 3, 0.6}});
    SimConfig cfg{PlantSpec(std::move(g), {NodeDynamics::cubic_soft()})};
    cfg.dt = 1e-3;
    cfg.horizon = 1.0;
    cfg.record_stride = 1;
    cfg.seed = 1;
    return cfg;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("rk4 single step on exponential decay", "[sim]") {
    auto rhs = [](double, const Vec& y) { return Vec{-y[0]}; };
    const Vec y1 = rk4_step(rhs, {1.0}, 0.0, 0.1);
    // Fourth-order Taylor value of exp(-0.1).
    REQUIRE(y1[0] == Catch::Approx(0.9048375).epsilon(1e-12));
    REQUIRE(std::abs(y1[0] - std::exp(-0.1)) < 1e-7);
}

TEST_CASE("rk4 reaches fourth order on exponential decay", "[sim]") {
    auto rhs = [](double, const Vec& y) { return Vec{-y[0]}; };
    auto global_error = [&](double dt) {
        Vec y{1.0};
        const long long steps = std::llround(1.0 / dt);
        for (long long i = 0; i < steps; ++i)
            y = rk4_step(rhs, y, static_cast<double>(i) * dt, dt);
        return std::abs(y[0] - std::exp(-1.0));
    };
    const double e1 = global_error(1e-2);
    const double e2 = global_error(5e-3);
    const double e3 = global_error(2.5e-3);
    REQUIRE(std::log2(e1 / e2) > 3.8);
    REQUIRE(std::log2(e2 / e3) > 3.8);
}

TEST_CASE("rk4 rejects non-finite stages", "[sim]") {
    auto rhs = [](double, const Vec& y) { return Vec{y[0] * 1e308}; };
    REQUIRE_THROWS_AS(rk4_step(rhs, {1e308}, 0.0, 1.0), NumericError);
}

TEST_CASE("config validation", "[sim]") {
    SimConfig cfg = triangle_config();
    REQUIRE_NOTHROW(cfg.validate());

    SECTION("bad step") {
        cfg.dt = 0.0;
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SECTION("horizon below one step") {
        cfg.horizon = 1e-4;
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SECTION("bad stride") {
        cfg.record_stride = 0;
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SECTION("negative gain") {
        cfg.gains.c1 = -1.0;
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SECTION("zero gain is allowed, only warned about") {
        cfg.gains.c1 = 0.0;
        REQUIRE_NOTHROW(cfg.validate());
        REQUIRE(gain_warning(cfg).has_value());
    }
    SECTION("init size mismatch") {
        cfg.init.x0 = Vec{1.0};
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SECTION("init non-finite") {
        cfg.init.w_hat0 = Vec{0.0, std::nan(""), 0.0};
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("initial conditions resolve from seed and overrides", "[sim]") {
    SimConfig cfg = triangle_config();

    const ResolvedInit a = resolve_init(cfg);
    REQUIRE(a.x0.size() == 3);
    for (double v : a.x0) {
        REQUIRE(v >= -1.0);
        REQUIRE(v <= 1.0);
    }
    REQUIRE(a.x_hat0 == Vec(3, 0.0));
    REQUIRE(a.w_hat0 == Vec(3, 0.0));

    REQUIRE(resolve_init(cfg).x0 == a.x0);  // same seed, same draw
    cfg.seed = 2;
    REQUIRE(resolve_init(cfg).x0 != a.x0);

    cfg.init.x0 = Vec{0.1, 0.2, 0.3};
    REQUIRE(resolve_init(cfg).x0 == Vec{0.1, 0.2, 0.3});
}

TEST_CASE("gain warning thresholds", "[sim]") {
    SimConfig cfg = triangle_config();

    cfg.gain_mode = GainMode::prop2;
    cfg.gains.c1 = 3.0;  // equal to n: not strictly above, so warn
    REQUIRE(gain_warning(cfg).has_value());
    cfg.gains.c1 = 3.1;
    REQUIRE_FALSE(gain_warning(cfg).has_value());

    cfg.gain_mode = GainMode::prop1;  // lambda_min of this triangle is > -1
    cfg.gains.c1 = 1.0;
    REQUIRE_FALSE(gain_warning(cfg).has_value());
}

TEST_CASE("simulation is deterministic and records the requested grid", "[sim]") {
    SimConfig cfg = triangle_config();
    const Trajectory a = simulate(cfg);
    const Trajectory b = simulate(cfg);

    REQUIRE(a.times == b.times);
    REQUIRE(a.x == b.x);
    REQUIRE(a.x_hat == b.x_hat);
    REQUIRE(a.w_hat == b.w_hat);
    REQUIRE(a.u == b.u);

    REQUIRE(a.samples() == 1001);
    REQUIRE(a.times.front() == 0.0);
    REQUIRE(a.times.back() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(a.n_nodes == 3);
    REQUIRE(a.m_bar == 3);

    SECTION("different seed changes the run") {
        SimConfig other = triangle_config();
        other.seed = 7;
        REQUIRE(simulate(other).x != a.x);
    }
}

TEST_CASE("stride recording keeps the endpoint", "[sim]") {
    SimConfig cfg = triangle_config();
    cfg.record_stride = 7;
    const Trajectory traj = simulate(cfg);

    // 1000 steps: samples at 0, 7, ..., 994, plus the final step 1000.
    REQUIRE(traj.samples() == 144);
    REQUIRE(traj.times.front() == 0.0);
    REQUIRE(traj.times.back() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(traj.times[1] == Catch::Approx(0.007).margin(1e-12));

    SimConfig full = triangle_config();
    const Trajectory dense = simulate(full);
    // Strided samples are the same states, not a different integration.
    for (int i = 0; i < 3; ++i) {
        REQUIRE(traj.x(1, i) == dense.x(7, i));
        REQUIRE(traj.x(143, i) == dense.x(1000, i));
    }
}

TEST_CASE("undersized gain on an antagonistic pair diverges", "[sim]") {
    SignedGraph g(2, {{1, 2, -1.0}}, true);
    SimConfig cfg{PlantSpec(std::move(g), {NodeDynamics::zero()})};
    cfg.gains.c1 = 0.0;
    cfg.signal.pe_terms.clear();  // no excitation: pure error dynamics
    cfg.dt = 1e-3;
    cfg.horizon = 30.0;
    cfg.record_stride = 100;
    cfg.init.x0 = Vec{1.0, -1.0};

    REQUIRE_THROWS_AS(simulate(cfg), DivergenceError);
}

TEST_CASE("closed loop agrees with the reduced error system", "[sim]") {
    SimConfig cfg = triangle_config();
    cfg.horizon = 2.0;
    const CrossValidation cv = cross_validate(cfg);
    REQUIRE(cv.max_deviation() < 1e-8);
    REQUIRE(cv.max_x_tilde_deviation >= 0.0);
}

TEST_CASE("trajectory csv round trip is exact", "[sim]") {
    SimConfig cfg = triangle_config();
    cfg.horizon = 0.05;
    const Trajectory traj = simulate(cfg);

    const std::string path = temp_path("signet_test_traj.csv");
    write_trajectory_csv(traj, path);
    const Trajectory back = read_trajectory_csv(path);

    REQUIRE(back.n_nodes == traj.n_nodes);
    REQUIRE(back.m_bar == traj.m_bar);
    REQUIRE(back.times == traj.times);
    REQUIRE(back.x == traj.x);
    REQUIRE(back.x_hat == traj.x_hat);
    REQUIRE(back.w_hat == traj.w_hat);
    REQUIRE(back.u.empty());
    std::remove(path.c_str());
}

TEST_CASE("trajectory csv rejects malformed input", "[sim]") {
    const std::string path = temp_path("signet_test_bad.csv");

    auto write_text = [&](const std::string& text) {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        REQUIRE(f != nullptr);
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    };

    SECTION("missing file") {
        REQUIRE_THROWS_AS(read_trajectory_csv(temp_path("signet_no_such.csv")), IoError);
    }
    SECTION("bad header") {
        write_text("time,x_1\n0,1\n");
        REQUIRE_THROWS_AS(read_trajectory_csv(path), FormatError);
    }
    SECTION("inconsistent column counts") {
        write_text("t,x_1,x_2,xhat_1,xhat_2,what_1\n0,1,2,3,4\n");
        REQUIRE_THROWS_AS(read_trajectory_csv(path), FormatError);
    }
    SECTION("non-numeric field") {
        write_text("t,x_1,x_2,xhat_1,xhat_2,what_1\n0,1,2,3,4,oops\n");
        REQUIRE_THROWS_AS(read_trajectory_csv(path), FormatError);
    }
    SECTION("header with wrong edge count") {
        write_text("t,x_1,x_2,xhat_1,xhat_2,what_1,what_2\n");
        REQUIRE_THROWS_AS(read_trajectory_csv(path), FormatError);
    }
    std::remove(path.c_str());
}

TEST_CASE("17 significant digits round trip doubles", "[sim]") {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 12345.678901234567, 0.0}) {
        const std::string s = format_sig17(v);
        REQUIRE(std::stod(s) == v);
    }
}
