#pragma once

#include <cmath>

#include "oes/common.hpp"

namespace oes {

// Log-distance channel: free-space reference at `reference_distance_m`,
// slope 10 * n * env_loss * log10(d/d0), plus a frozen shadowing sample.
struct ChannelModel {
    double path_loss_exponent = 2.0;
    double reference_distance_m = 1.0;
    double env_loss_factor = 1.0;       // multiplies the distance-slope term
    double shadowing_sigma_db = 7.9;
    double noise_w = 1.9952623149688827e-12;  // -87 dBm: thermal over 100 MHz + 7 dB NF
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline double free_space_path_loss_db(double distance_m, double freq_hz) {
    return 20.0 * std::log10(4.0 * M_PI * distance_m * freq_hz / kSpeedOfLight);
}

// Distances inside the reference sphere are clamped to the reference
// distance rather than rejected.
inline double path_loss_db(double distance_m, double freq_hz, const ChannelModel& model,
                           double shadow_db = 0.0) {
    if (freq_hz <= 0.0) {
        fail(Error::Kind::InvalidModel, "path_loss_db: frequency must be positive");
    }
    double d = std::max(distance_m, model.reference_distance_m);
    double slope = 10.0 * model.path_loss_exponent * model.env_loss_factor *
                   std::log10(d / model.reference_distance_m);
    return free_space_path_loss_db(model.reference_distance_m, freq_hz) + slope + shadow_db;
}

// beta(u, r) = 10^((g_t + g_r - PL) / 10), linear power ratio, always > 0.
inline double gain_from_path_loss(double tx_gain_db, double rx_gain_db, double path_loss) {
    return db_to_linear(tx_gain_db + rx_gain_db - path_loss);
}

inline double snr_linear(double gain_beta, double tx_power_w, double noise_w) {
    if (noise_w <= 0.0) {
        fail(Error::Kind::InvalidModel, "snr: noise power must be positive");
    }
    if (tx_power_w < 0.0) {
        fail(Error::Kind::InvalidModel, "snr: negative transmit power");
    }
    return gain_beta * tx_power_w / noise_w;
}

// Per-link radio state as exported by the RF environment manager.
// rsrp is recomputable from the stored fields.
struct LinkState {
    double gain_beta = 0.0;  // linear
    double rsrp_dbm = 0.0;
    double snr_db = 0.0;
};

inline LinkState make_link_state(double tx_power_w, double tx_gain_db, double rx_gain_db,
                                 double path_loss, double noise_w) {
    LinkState ls;
    ls.gain_beta = gain_from_path_loss(tx_gain_db, rx_gain_db, path_loss);
    ls.rsrp_dbm = watts_to_dbm(tx_power_w) + tx_gain_db + rx_gain_db - path_loss;
    ls.snr_db = linear_to_db(snr_linear(ls.gain_beta, tx_power_w, noise_w));
    return ls;
}

}  // namespace oes
