#include <cmath>
#include <vector>

#include "doctest.h"
#include "ttlab/core/errors.hpp"
#include "ttlab/env/table_tennis_env.hpp"
#include "ttlab/realbridge/contact_inference.hpp"
#include "ttlab/realbridge/episode_start.hpp"
#include "ttlab/realbridge/fusion.hpp"
#include "ttlab/realbridge/safety.hpp"
#include "ttlab/realbridge/savitzky_golay.hpp"
#include "ttlab/realbridge/throttle.hpp"

using namespace ttlab;
using namespace ttlab::realbridge;

TEST_SUITE("savitzky-golay") {
    TEST_CASE("classical five point quadratic weights") {
        const std::vector<double> t = {0, 1, 2, 3, 4};
        const VecX w = savgol_weights(t, 2, 2);
        const double expect[] = {-3, 12, 17, 12, -3};
        for (int i = 0; i < 5; ++i) CHECK(w[i] * 35.0 == doctest::Approx(expect[i]));
    }

    TEST_CASE("uneven spacing still reproduces a quadratic") {
        const std::vector<double> t = {0.0, 0.3, 0.35, 1.1, 1.6, 2.0, 2.9};
        const auto f = [](double x) { return 1.0 - 2.0 * x + 0.7 * x * x; };
        for (int target = 0; target < 7; ++target) {
            const VecX w = savgol_weights(t, target, 2);
            double v = 0.0;
            for (int i = 0; i < 7; ++i) v += w[i] * f(t[i]);
            CHECK(v == doctest::Approx(f(t[target])).epsilon(1e-10));
        }
    }

    TEST_CASE("short series are fitted whole and bad filters are rejected") {
        const std::vector<double> x = {1.0, 2.0, 3.0};
        const auto y = savgol_filter(x);
        for (int i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(x[i]));
        SavitzkyGolay bad;
        bad.order = 9;
        CHECK_THROWS(bad.validate());
    }
}

TEST_SUITE("fusion") {
    TEST_CASE("extrapolation is flagged stale past the horizon") {
        fidelity::TimedBuffer b(1, 32);
        for (int i = 0; i < 20; ++i) {
            const double v = 2.0 * i * 0.008;
            b.push(i * 0.008, std::span<const double>(&v, 1));
        }
        FusionParams fp;
        double out = 0.0;
        const double newest = 19 * 0.008;
        CHECK_FALSE(fuse_buffer(b, newest + 0.02, fp, std::span<double>(&out, 1)));
        CHECK(out == doctest::Approx(2.0 * (newest + 0.02)));
        CHECK(fuse_buffer(b, newest + 0.2, fp, std::span<double>(&out, 1)));
        CHECK(out == doctest::Approx(2.0 * (newest + fp.max_extrapolation)));
    }

    TEST_CASE("an empty stream is named in the error") {
        SensorStreams s;
        const std::vector<double> arm(6, 0.0), gantry(2, 0.0);
        s.arm.push(0.0, arm);
        s.gantry.push(0.0, gantry);
        try {
            fuse_sensor_observation(s, 0.0);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("ball") != std::string::npos);
        }
    }

    TEST_CASE("feature layout is joints then ball") {
        FusedObservation f;
        f.joints.setConstant(1.0);
        f.ball = Vec3(7, 8, 9);
        const VecX v = f.feature();
        CHECK(v.size() == 11);
        CHECK(v[7] == 1.0);
        CHECK(v[8] == 7.0);
    }
}

TEST_SUITE("throttle") {
    TEST_CASE("fast steps take one period, slow steps snap to the next boundary") {
        CHECK(throttle_step(1.0, 0.004, 100.0) == doctest::Approx(1.01));
        CHECK(throttle_step(1.0, 0.01, 100.0) == doctest::Approx(1.01));
        CHECK(throttle_step(1.0, 0.013, 100.0) == doctest::Approx(1.02));
        CHECK_THROWS_AS(throttle_step(0.0, 0.0, 0.0), InvalidArgument);
    }

    TEST_CASE("boundaries stay on the grid and overruns are counted") {
        Throttler t(100.0);
        t.start(0.5);
        double next = 0.5;
        for (int k = 0; k < 1000; ++k) next = t.finish_step(next + 0.003);
        CHECK(next == 0.5 + 1000 / 100.0);
        CHECK(t.overruns() == 0);
        next = t.finish_step(next + 0.025);
        CHECK(t.step_index() == 1003);
        CHECK(t.overruns() == 1);
    }
}

TEST_SUITE("safety") {
    const dynamics::KinematicChain chain = dynamics::KinematicChain::default_robot();

    TEST_CASE("a still robot at home is left alone") {
        const dynamics::JointVector q = dynamics::JointVector::Zero();
        const SafeCommand c = filter_command_safety(chain, q, dynamics::JointVector::Zero());
        CHECK_FALSE(c.modified);
        CHECK(c.position == q);
    }

    TEST_CASE("velocity limits are enforced") {
        const dynamics::JointVector q = dynamics::JointVector::Zero();
        const dynamics::JointVector v = dynamics::JointVector::Constant(100.0);
        const SafeCommand c = filter_command_safety(chain, q, v);
        CHECK(c.modified);
        CHECK((c.velocity.cwiseAbs().array() <= chain.velocity_limits().array() + 1e-12).all());
    }

    TEST_CASE("driving the paddle down into the table is stopped") {
        const dynamics::JointVector q = dynamics::JointVector::Zero();
        const SafetyLimits lim;
        Rng rng(8);
        for (int i = 0; i < 200; ++i) {
            dynamics::JointVector v;
            for (int j = 0; j < dynamics::kDof; ++j) v[j] = uniform(rng, -1.0, 1.0) * chain.velocity_limits()[j];
            const SafeCommand c = filter_command_safety(chain, q, v, lim);
            const dynamics::JointVector ahead = q + c.velocity * lim.lookahead;
            CHECK((ahead.array() >= chain.lower_limits().array() - 1e-9).all());
            CHECK((ahead.array() <= chain.upper_limits().array() + 1e-9).all());
            CHECK(dynamics::paddle_pose(chain, ahead).position.z() >= lim.min_paddle_height - 1e-9);
        }
    }
}

TEST_SUITE("episode start") {
    BallSample incoming(double t) {
        BallSample s;
        s.t = t;
        s.position = {0.0, 2.0 - 6.0 * t, 0.3};
        s.velocity = {0.0, -6.0, 0.0};
        return s;
    }

    TEST_CASE("debounced start time") {
        std::vector<BallSample> track;
        BallSample outside = incoming(0.0);
        outside.position.y() = 3.0;
        track.push_back(outside);
        BallSample glitch = incoming(0.008);
        track.push_back(glitch);
        BallSample away = incoming(0.016);
        away.velocity.y() = 2.0;
        track.push_back(away);
        for (int i = 3; i < 8; ++i) track.push_back(incoming(0.008 * i));
        const auto t = detect_episode_start(track);
        REQUIRE(t.has_value());
        CHECK(*t == doctest::Approx(0.024));
        CHECK_FALSE(detect_episode_start({outside, glitch}).has_value());
    }

    TEST_CASE("finite difference velocities") {
        std::vector<BallSample> track = {incoming(0.0), incoming(0.01), incoming(0.02)};
        for (auto& s : track) s.velocity.setZero();
        const auto v = with_finite_difference_velocity(track);
        for (const auto& s : v) CHECK(s.velocity.y() == doctest::Approx(-6.0));
    }
}

TEST_SUITE("contact inference") {
    TEST_CASE("a simulated direct return is refereed the same way") {
        env::EnvConfig c;
        c.action_mode = env::ActionMode::task_position;
        c.observation_mode = env::ObservationMode::task;
        c.fidelity.latency.scale = 0.0;
        c.fidelity.noise.half_width.setZero();
        c.ball_distribution = env::BallDistribution::tiny();
        c.fidelity.randomization.table_restitution.half_range = 0.0;
        c.fidelity.randomization.paddle_restitution.half_range = 0.0;
        env::TableTennisEnv e(c);

        std::vector<BallSample> ball;
        std::vector<PaddleSample> paddle;
        int substeps = 0;
        e.set_substep_observer([&](const env::SubstepTrace& s) {
            // 250 Hz tracker frames
            if (substeps++ % 4 == 0) {
                ball.push_back({s.time, s.ball.position, s.ball.velocity});
                paddle.push_back({s.time, s.paddle});
            }
        });
        VecX obs = e.reset(1000);
        const auto home = e.home_task();
        std::vector<env::EventKind> sim;
        for (;;) {
            const Vec3 b = obs.tail(3);
            VecX a(5);
            a << b.x() - home[0], -0.75 - 0.4 * b.y(), b.z() - home[2], 0.25, 0.0;
            const auto r = e.step(a);
            for (const auto& ev : r.info.events) sim.push_back(ev.kind);
            obs = r.observation;
            if (r.done) break;
        }
        REQUIRE(sim == std::vector<env::EventKind>{env::EventKind::TABLE_ARM, env::EventKind::PADDLE_ARM,
                                                   env::EventKind::TABLE_OPP});
        const auto inferred = infer_contact_events(ball, paddle, c.surfaces);
        std::vector<env::EventKind> kinds;
        for (const auto& ev : inferred) kinds.push_back(ev.kind);
        CHECK(kinds == sim);
    }

    TEST_CASE("without paddle samples no paddle contact is reported") {
        std::vector<BallSample> ball;
        for (int i = 0; i < 20; ++i) {
            const double t = 0.004 * i;
            const double z = 0.03 + std::abs(t - 0.04) * 3.0;  // bounce at t = 0.04
            ball.push_back({t, Vec3(0.0, -0.6, z), Vec3::Zero()});
        }
        const auto ev = infer_contact_events(ball, {}, dynamics::SurfaceParams{});
        REQUIRE(ev.size() == 1);
        CHECK(ev[0].kind == env::EventKind::TABLE_ARM);
        CHECK(ev[0].time == doctest::Approx(0.04));
    }
}
