#pragma once

namespace ttlab::dynamics {

/// Table, net, paddle and floor geometry plus contact restitutions. Heights
/// are in the table frame, so the playing surface is at table_height.
struct SurfaceParams {
    double table_restitution = 0.9;
    double paddle_restitution = 0.7;
    double table_height = 0.0;
    double table_half_width = 0.7625;
    double table_half_length = 1.37;
    double net_height = 0.1525;
    double net_overhang = 0.1525;
    double net_restitution = 0.2;
    double paddle_mass = 0.08;
    double paddle_radius = 0.075;
    double floor_height = -0.76;

    void validate() const;
};

}  // namespace ttlab::dynamics
