#include <gtest/gtest.h>

#include <cmath>

#include "oes/channel.hpp"

namespace {

using namespace oes;

ChannelModel table_model() {
    ChannelModel m;
    m.path_loss_exponent = 2.0;
    m.reference_distance_m = 1.0;
    m.env_loss_factor = 1.0;
    m.shadowing_sigma_db = 7.9;
    return m;
}

TEST(PathLoss, ReferenceDistanceIsPureFspl) {
    ChannelModel m = table_model();
    for (double f : {0.9e9, 3.5e9, 7.125e9}) {
        EXPECT_DOUBLE_EQ(path_loss_db(m.reference_distance_m, f, m, 0.0),
                         free_space_path_loss_db(m.reference_distance_m, f));
    }
}

TEST(PathLoss, TenfoldDistanceAddsTwentyDb) {
    ChannelModel m = table_model();
    double f = 7.125e9;
    double at_d0 = path_loss_db(1.0, f, m, 0.0);
    EXPECT_NEAR(path_loss_db(10.0, f, m, 0.0), at_d0 + 20.0, 1e-12);
}

// Hand computation: FSPL(1 m, 7.125 GHz) = 20*log10(4*pi*f/c) with
// c = 299792458 m/s, plus 10*2*1*log10(30) = 29.5424 dB.
TEST(PathLoss, HandComputedThirtyMeterLink) {
    ChannelModel m = table_model();
    double pl = path_loss_db(30.0, 7.125e9, m, 0.0);
    EXPECT_NEAR(pl, 79.04590568988758, 1e-9);
    EXPECT_NEAR(free_space_path_loss_db(1.0, 7.125e9), 49.50348059549433, 1e-9);
}

TEST(PathLoss, BelowReferenceClampsToReference) {
    ChannelModel m = table_model();
    double f = 7.125e9;
    EXPECT_DOUBLE_EQ(path_loss_db(0.2, f, m, 0.0), path_loss_db(1.0, f, m, 0.0));
}

TEST(PathLoss, ShadowSampleAddsDirectly) {
    ChannelModel m = table_model();
    double base = path_loss_db(30.0, 7.125e9, m, 0.0);
    EXPECT_DOUBLE_EQ(path_loss_db(30.0, 7.125e9, m, 3.25), base + 3.25);
}

TEST(PathLoss, MonotoneInDistanceWithoutShadowing) {
    ChannelModel m = table_model();
    double prev = 0.0;
    for (double d = 1.0; d <= 200.0; d += 0.5) {
        double pl = path_loss_db(d, 7.125e9, m, 0.0);
        EXPECT_GE(pl, prev);
        prev = pl;
    }
}

TEST(ChannelGain, ZeroDbIsUnity) {
    EXPECT_DOUBLE_EQ(gain_from_path_loss(8.0, 2.0, 10.0), 1.0);
}

TEST(ChannelGain, DirectDbConversion) {
    EXPECT_NEAR(gain_from_path_loss(8.0, 2.0, 110.0), 1e-10, 1e-22);
}

// Composition of the table gains with the hand-computed 30 m path loss.
TEST(ChannelGain, TableLinkAtThirtyMeters) {
    ChannelModel m = table_model();
    double pl = path_loss_db(30.0, 7.125e9, m, 0.0);
    double beta = gain_from_path_loss(8.0, 2.0, pl);
    EXPECT_NEAR(beta, 1.2456884308237795e-07, 1e-16);
    EXPECT_GT(beta, 0.0);
}

TEST(Snr, ZeroPowerGivesZero) {
    EXPECT_DOUBLE_EQ(snr_linear(1e-8, 0.0, 1e-12), 0.0);
}

TEST(Snr, DirectArithmetic) {
    EXPECT_DOUBLE_EQ(snr_linear(1e-10, 1.0, 1e-12), 100.0);
}

TEST(Snr, LinearInPower) {
    double beta = 3.7e-9;
    double sigma2 = 2e-12;
    for (double w : {0.1, 0.5, 1.0}) {
        EXPECT_DOUBLE_EQ(snr_linear(beta, 2.0 * w, sigma2),
                         2.0 * snr_linear(beta, w, sigma2));
    }
}

TEST(Snr, InvalidNoiseRejected) {
    EXPECT_THROW(snr_linear(1e-8, 1.0, 0.0), Error);
    EXPECT_THROW(snr_linear(1e-8, 1.0, -1e-12), Error);
}

TEST(Snr, DecreasesWithPathLoss) {
    ChannelModel m = table_model();
    double prev = std::numeric_limits<double>::infinity();
    for (double d : {5.0, 20.0, 50.0, 120.0}) {
        double beta = gain_from_path_loss(8.0, 2.0, path_loss_db(d, 7.125e9, m, 0.0));
        double s = snr_linear(beta, 1.0, 1e-12);
        EXPECT_LT(s, prev);
        prev = s;
    }
}

// rsrp = tx_dBm + g_t + g_r - PL, recomputable from the stored fields.
TEST(LinkState, RsrpRecomputable) {
    double pl = 92.4;
    LinkState ls = make_link_state(1.0, 8.0, 2.0, pl, 1e-12);
    double expected_rsrp = watts_to_dbm(1.0) + 8.0 + 2.0 - pl;
    EXPECT_NEAR(ls.rsrp_dbm, expected_rsrp, 1e-9);
    EXPECT_NEAR(ls.snr_db, linear_to_db(snr_linear(ls.gain_beta, 1.0, 1e-12)), 1e-9);
}

}  // namespace
