#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ttlab/core/errors.hpp"
#include "ttlab/tracking/bias_study.hpp"
#include "ttlab/tracking/evaluation.hpp"
#include "ttlab/tracking/kalman.hpp"
#include "ttlab/tracking/triangulation.hpp"

using namespace ttlab;
using namespace ttlab::tracking;

TEST_SUITE("camera") {
    TEST_CASE("look_at centres the target") {
        const CameraModel cam = CameraModel::look_at({1.0, -2.0, 2.0}, {0.0, 0.0, 0.0});
        const Vec2 px = project_exact(cam, Vec3::Zero());
        CHECK(px.x() == doctest::Approx(cam.cx));
        CHECK(px.y() == doctest::Approx(cam.cy));
        CHECK((cam.center() - Vec3(1.0, -2.0, 2.0)).norm() < 1e-12);
    }

    TEST_CASE("projection matrix agrees with the exact projection") {
        const CameraModel cam = CameraModel::look_at({0.0, -3.0, 1.5}, {0.0, 0.0, 0.2});
        const Vec3 p(0.3, 0.4, 0.5);
        const Vec3 h = cam.projection_matrix() * p.homogeneous();
        CHECK((h.hnormalized() - project_exact(cam, p)).norm() < 1e-9);
    }

    TEST_CASE("points behind the camera are rejected") {
        const CameraModel cam = CameraModel::look_at({0.0, -3.0, 1.0}, {0.0, 0.0, 1.0});
        CHECK_THROWS_AS(project_exact(cam, {0.0, -4.0, 1.0}), InvalidArgument);
    }

    TEST_CASE("quantized projection lands on pixel centres") {
        CameraModel cam = CameraModel::look_at({0.0, -3.0, 1.0}, {0.0, 0.0, 1.0});
        cam.quantize = true;
        const Vec2 px = project(cam, {0.013, 0.0, 1.021});
        CHECK(px.x() == std::round(px.x()));
        CHECK(px.y() == std::round(px.y()));
    }
}

TEST_SUITE("triangulation") {
    const std::vector<CameraModel> cams = {CameraModel::look_at({-1.0, -2.0, 2.0}, Vec3::Zero()),
                                           CameraModel::look_at({1.5, 0.5, 2.0}, Vec3::Zero())};

    TEST_CASE("exact pixels recover the point") {
        for (const Vec3& p : {Vec3(0.0, 0.0, 0.3), Vec3(0.4, -0.9, 0.1), Vec3(-0.3, 0.6, 0.8)}) {
            const std::vector<Vec2> px = {project_exact(cams[0], p), project_exact(cams[1], p)};
            CHECK((triangulate_dlt(cams, px) - p).norm() < 1e-9);
        }
    }

    TEST_CASE("detections address cameras by id") {
        const Vec3 p(0.2, 0.1, 0.4);
        std::vector<Detection2D> d(2);
        d[0].camera_id = 1;
        d[0].pixel = project_exact(cams[1], p);
        d[1].camera_id = 0;
        d[1].pixel = project_exact(cams[0], p);
        CHECK((triangulate_dlt(cams, d) - p).norm() < 1e-9);
    }

    TEST_CASE("a single view or parallel rays are degenerate") {
        const Vec3 p(0.0, 0.0, 0.3);
        const std::vector<CameraModel> one = {cams[0]};
        const std::vector<Vec2> px1 = {project_exact(cams[0], p)};
        CHECK_THROWS_AS(triangulate_dlt(one, px1), InvalidArgument);
        const std::vector<CameraModel> same = {cams[0], cams[0]};
        const std::vector<Vec2> px2 = {px1[0], px1[0]};
        CHECK_THROWS_AS(triangulate_dlt(same, px2), InvalidArgument);
    }
}

TEST_SUITE("kalman") {
    TEST_CASE("a ballistic track is confirmed and followed") {
        KalmanParams kp;
        kp.measurement_noise = 0.002;
        const Vec3 p0(0.0, 1.5, 0.3), v0(0.2, -5.0, 1.0), g = gravity_vector();
        auto pos = [&](double t) -> Vec3 { return p0 + v0 * t + 0.5 * t * t * g; };
        TrackState s = init_track(p0, 0.0, kp);
        CHECK(s.status == TrackStatus::tentative);
        Rng rng(2);
        const double dt = 1.0 / 150.0;
        for (int i = 1; i <= 40; ++i) {
            const Vec3 z = pos(i * dt) + 0.002 * Vec3(standard_normal(rng), standard_normal(rng), standard_normal(rng));
            s = kalman_step(s, z, i * dt, kp);
            CHECK(is_spd(s.covariance));
            if (i >= 2) CHECK(s.status == TrackStatus::active);
        }
        const double T = 40 * dt;
        CHECK((s.mean.head<3>() - pos(T)).norm() < 0.01);
        CHECK((s.mean.tail<3>() - (v0 + T * g)).norm() < 0.3);
    }

    TEST_CASE("outliers are gated and misses terminate") {
        KalmanParams kp;
        kp.max_misses = 3;
        TrackState s = init_track({0.0, 0.0, 0.5}, 0.0, kp);
        s = kalman_step(s, Vec3(5.0, 5.0, 5.0), 0.01, kp);
        CHECK_FALSE(s.last_accepted);
        for (int i = 2; i <= 3; ++i) s = kalman_step(s, std::nullopt, 0.01 * i, kp);
        CHECK(s.status == TrackStatus::terminated);
    }

    TEST_CASE("time and covariance preconditions") {
        TrackState s = init_track(Vec3::Zero(), 1.0);
        CHECK_THROWS_AS(kalman_step(s, std::nullopt, 0.5), InvalidArgument);
        s.covariance(0, 1) = 5.0;
        CHECK_THROWS_AS(kalman_step(s, std::nullopt, 1.1), InvalidArgument);
    }
}

TEST_SUITE("scoring") {
    TEST_CASE("precision and recall") {
        const std::vector<TimedPoint> truth = {{0.0, {0, 0, 0}}, {0.1, {1, 0, 0}}, {0.2, {2, 0, 0}}, {0.3, {3, 0, 0}}};
        const std::vector<TimedPoint> est = {{0.0, {0.01, 0, 0}}, {0.1, {1.2, 0, 0}}, {0.2, {2, 0.04, 0}}};
        const TrackingScore s = evaluate_tracking(est, truth);
        CHECK(s.true_positives == 2);
        CHECK(s.precision == doctest::Approx(2.0 / 3.0));
        CHECK(s.recall == doctest::Approx(0.5));
        CHECK(evaluate_tracking({}, truth).precision == 0.0);
        CHECK_THROWS_AS(evaluate_tracking(est, {}), InvalidArgument);
    }
}

TEST_SUITE("bias study") {
    TEST_CASE("without quantization or noise there is no bias") {
        BiasStudyConfig c;
        c.quantize = false;
        c.noise_px = 0.0;
        c.y_points = 5;
        c.positions = 3;
        c.samples = 2;
        for (const auto& p : bias_study({same_side_pair(), opposite_side_pair()}, c)) CHECK(p.mean_bias < 1e-9);
    }

    TEST_CASE("csv has a header and one row per point") {
        BiasStudyConfig c;
        c.y_points = 3;
        c.positions = 2;
        c.samples = 2;
        const auto pts = bias_study({same_side_pair()}, c);
        CHECK(pts.size() == 3);
        std::ostringstream os;
        write_bias_csv(os, pts);
        std::istringstream in(os.str());
        std::string line;
        int lines = 0;
        std::getline(in, line);
        CHECK(line.find("y_position_m") != std::string::npos);
        while (std::getline(in, line)) ++lines;
        CHECK(lines == 3);
    }

    TEST_CASE("validation") {
        BiasStudyConfig c;
        c.y_points = 0;
        CHECK_THROWS(c.validate());
    }
}
