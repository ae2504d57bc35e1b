#include <cmath>

#include "doctest.h"
#include "ttlab/core/errors.hpp"
#include "ttlab/dynamics/ball.hpp"
#include "ttlab/dynamics/kinematics.hpp"
#include "ttlab/dynamics/task_space.hpp"

using namespace ttlab;
using namespace ttlab::dynamics;

TEST_SUITE("ball") {
    TEST_CASE("vacuum flight is an exact parabola") {
        BallPhysicalParams p;
        p.air_density = 0.0;
        BallState s;
        s.position = {0.1, -1.0, 0.3};
        s.velocity = {0.5, 4.0, 2.0};
        const double t = 0.37;
        const BallState e = integrate_flight(s, p, t);
        const Vec3 expect = s.position + s.velocity * t + 0.5 * t * t * gravity_vector();
        CHECK((e.position - expect).norm() < 1e-12);
        CHECK(e.time == doctest::Approx(t));
    }

    TEST_CASE("integration backwards undoes forwards") {
        const BallPhysicalParams p;
        BallState s;
        s.position = {0.0, -1.2, 0.25};
        s.velocity = {0.3, 6.0, 1.5};
        const BallState back = integrate_flight(integrate_flight(s, p, 0.4), p, -0.4);
        CHECK((back.position - s.position).norm() < 1e-9);
        CHECK((back.velocity - s.velocity).norm() < 1e-9);
    }

    TEST_CASE("terminal speed of the standard ball") {
        // sqrt(2 m g / (rho Cd pi r^2)) with m 2.7 g, Cd 0.47, r 20 mm, rho 1.2
        CHECK(terminal_speed(BallPhysicalParams{}) == doctest::Approx(8.6454).epsilon(1e-4));
    }

    TEST_CASE("drag opposes motion") {
        const Vec3 a = flight_acceleration({5.0, 0.0, 0.0}, Vec3::Zero(), BallPhysicalParams{});
        CHECK(a.x() < 0.0);
        CHECK(a.z() == doctest::Approx(-kGravity));
    }

    TEST_CASE("bounce reflects the normal component only") {
        BallState s;
        s.velocity = {1.0, 2.0, -3.0};
        const BallState b = bounce(s, Vec3::UnitZ(), 0.9);
        CHECK(b.velocity.x() == 1.0);
        CHECK(b.velocity.y() == 2.0);
        CHECK(b.velocity.z() == doctest::Approx(2.7));
        CHECK_THROWS_AS(bounce(s, Vec3(0, 0, 2), 0.9), InvalidArgument);
    }

    TEST_CASE("step_ball_flight rejects long steps") {
        CHECK_THROWS(step_ball_flight(BallState{}, BallPhysicalParams{}, 0.02));
        CHECK_THROWS(step_ball_flight(BallState{}, BallPhysicalParams{}, 0.0));
    }

    TEST_CASE("parameter validation") {
        BallPhysicalParams p;
        p.mass = -1.0;
        CHECK_THROWS_AS(p.validate(), InvalidArgument);
    }
}

TEST_SUITE("kinematics") {
    const KinematicChain chain = KinematicChain::default_robot();

    JointVector mid() { return 0.5 * (chain.lower_limits() + chain.upper_limits()); }

    TEST_CASE("position Jacobian matches finite differences") {
        const JointVector q = mid() + JointVector::Constant(0.05);
        const PositionJacobian j = position_jacobian(chain, q);
        const double h = 1e-6;
        for (int i = 0; i < kDof; ++i) {
            JointVector a = q, b = q;
            a[i] += h;
            b[i] -= h;
            const Vec3 fd = (paddle_pose(chain, a).position - paddle_pose(chain, b).position) / (2 * h);
            CHECK((fd - j.col(i)).norm() < 1e-6);
        }
    }

    TEST_CASE("task Jacobian matches finite differences") {
        const JointVector q = mid() + JointVector::Constant(0.1);
        const TaskJacobian j = task_jacobian(chain, q);
        const double h = 1e-6;
        for (int i = 0; i < kDof; ++i) {
            JointVector a = q, b = q;
            a[i] += h;
            b[i] -= h;
            const TaskVector fd =
                (paddle_pose(chain, a).task_vector() - paddle_pose(chain, b).task_vector()) / (2 * h);
            CHECK((fd - j.col(i)).norm() < 1e-5);
        }
    }

    TEST_CASE("forward kinematics names joints outside their limits") {
        JointVector q = mid();
        q[3] = chain.upper_limits()[3] + 0.1;
        try {
            forward_kinematics(chain, q);
            FAIL("expected JointLimitError");
        } catch (const JointLimitError& e) {
            CHECK(e.joints() == std::vector<int>{3});
        }
    }

    TEST_CASE("paddle velocity is J qdot") {
        const JointVector q = mid();
        JointVector qd = JointVector::Zero();
        qd[0] = 0.5;  // gantry x
        const PaddlePose p = forward_kinematics(chain, q, &qd);
        CHECK((p.velocity - position_jacobian(chain, q) * qd).norm() < 1e-12);
    }

    TEST_CASE("roll and yaw round-trip through the normal") {
        for (double roll : {-1.0, -0.2, 0.0, 0.7}) {
            for (double yaw : {-2.0, 0.0, 0.5, 3.0}) {
                double r = 0.0, y = 0.0;
                angles_from_normal(normal_from_angles(roll, yaw), r, y);
                CHECK(r == doctest::Approx(roll));
                CHECK(y == doctest::Approx(yaw));
            }
        }
        CHECK((normal_from_angles(0.0, 0.0) - Vec3::UnitY()).norm() < 1e-12);
    }
}

TEST_SUITE("task space") {
    TEST_CASE("controller reduces the task error") {
        const KinematicChain chain = KinematicChain::default_robot();
        JointVector q = JointVector::Zero();  // home
        TaskVector target = paddle_pose(chain, q).task_vector();
        target[0] += 0.1;
        target[2] += 0.05;
        const double before = task_error(paddle_pose(chain, q), target).head<3>().norm();
        for (int i = 0; i < 50; ++i) q += 0.002 * task_space_command(chain, q, target).velocities;
        CHECK(task_error(paddle_pose(chain, q), target).head<3>().norm() < 0.5 * before);
    }

    TEST_CASE("commands respect velocity limits") {
        const KinematicChain chain = KinematicChain::default_robot();
        const JointVector q = 0.5 * (chain.lower_limits() + chain.upper_limits());
        TaskVector far = paddle_pose(chain, q).task_vector();
        far[0] += 5.0;
        const TaskCommand c = task_space_command(chain, q, far);
        CHECK(c.clamped);
        CHECK((c.velocities.cwiseAbs().array() <= chain.velocity_limits().array() + 1e-12).all());
    }

    TEST_CASE("paddle contact against a still paddle") {
        BallState b;
        b.velocity = {0.0, -5.0, 0.0};
        PaddlePose p;
        p.normal = Vec3::UnitY();
        const ContactResult r = paddle_contact(b, p, 0.7);
        CHECK(r.contact);
        CHECK(r.ball.velocity.y() == doctest::Approx(3.5));
        b.velocity = {0.0, 5.0, 0.0};
        CHECK_FALSE(paddle_contact(b, p, 0.7).contact);
    }
}
