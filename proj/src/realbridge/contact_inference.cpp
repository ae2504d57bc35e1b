#include "ttlab/realbridge/contact_inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ttlab::realbridge {
namespace {

using env::EventKind;

const PaddleSample* nearest(const std::vector<PaddleSample>& paddle, double t) {
    if (paddle.empty()) return nullptr;
    auto it = std::lower_bound(paddle.begin(), paddle.end(), t,
                               [](const PaddleSample& s, double v) { return s.t < v; });
    if (it == paddle.end()) return &paddle.back();
    if (it != paddle.begin() && t - std::prev(it)->t < it->t - t) return &*std::prev(it);
    return &*it;
}

}  // namespace

std::vector<env::GameEvent> infer_contact_events(const std::vector<BallSample>& ball,
                                                 const std::vector<PaddleSample>& paddle,
                                                 const dynamics::SurfaceParams& s, const ContactThresholds& th) {
    std::vector<env::GameEvent> events;
    std::map<EventKind, int> last_frame;
    bool grounded = false;
    const int n = static_cast<int>(ball.size());
    for (int i = 0; i < n; ++i) {
        const Vec3& p = ball[i].position;
        std::vector<EventKind> kinds;

        if (!grounded && p.z() < s.floor_height + th.ground_band) kinds.push_back(EventKind::GROUND);

        if (i >= 1 && i + 1 < n) {
            const double dt_in = ball[i].t - ball[i - 1].t;
            const double dt_out = ball[i + 1].t - ball[i].t;
            if (dt_in > 0.0 && dt_out > 0.0) {
                const Vec3 v_in = (p - ball[i - 1].position) / dt_in;
                const Vec3 v_out = (ball[i + 1].position - p) / dt_out;

                const bool over_table = std::abs(p.x()) <= s.table_half_width + th.ball_radius &&
                                        std::abs(p.y()) <= s.table_half_length + th.ball_radius;
                if (over_table && v_in.z() < 0.0 && v_out.z() > 0.0 &&
                    std::abs(p.z() - (s.table_height + th.ball_radius)) < th.table_band)
                    kinds.push_back(p.y() < 0.0 ? EventKind::TABLE_ARM : EventKind::TABLE_OPP);

                const double net_top = s.table_height + s.net_height + th.ball_radius;
                const double net_x = s.table_half_width + s.net_overhang;
                const Vec3& q = ball[i + 1].position;
                bool net = false;
                if ((p.y() < 0.0) != (q.y() < 0.0) && q.y() != p.y()) {
                    const double u = -p.y() / (q.y() - p.y());
                    const Vec3 c = p + u * (q - p);
                    net = std::abs(c.x()) <= net_x && c.z() >= s.table_height && c.z() <= net_top;
                }
                if (!net && std::abs(p.y()) < th.net_band + th.ball_radius && v_in.y() * v_out.y() < 0.0)
                    net = std::abs(p.x()) <= net_x && p.z() >= s.table_height && p.z() <= net_top;
                if (net) kinds.push_back(EventKind::NET);

                if (const PaddleSample* ps = nearest(paddle, ball[i].t)) {
                    const auto& pose = ps->pose;
                    const Vec3 d = p - pose.position;
                    const double dist = d.dot(pose.normal);
                    const double radial = (d - dist * pose.normal).norm();
                    const double vn_in = (v_in - pose.velocity).dot(pose.normal);
                    const double vn_out = (v_out - pose.velocity).dot(pose.normal);
                    if (std::abs(dist) < th.paddle_band && radial <= s.paddle_radius + th.paddle_rim &&
                        vn_in * vn_out < 0.0)
                        kinds.push_back(EventKind::PADDLE_ARM);
                }
            }
        }

        if (kinds.size() != 1) continue;
        const EventKind k = kinds.front();
        auto it = last_frame.find(k);
        if (it != last_frame.end() && i - it->second <= th.refractory_frames) continue;
        last_frame[k] = i;
        if (k == EventKind::GROUND) grounded = true;
        events.push_back(env::GameEvent{k, ball[i].t, p});
    }
    return events;
}

}  // namespace ttlab::realbridge
