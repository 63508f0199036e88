mod common;

use common::oracles;

#[test]
fn scalar_chord_slopes_stay_in_the_sector_disc() {
    oracles::scalar_chord_slopes_stay_in_the_sector_disc();
}

#[test]
fn signal_pairs_stay_in_the_sector_disc() {
    oracles::signal_pairs_stay_in_the_sector_disc();
}

#[test]
fn normal_matrix_points_lie_on_the_circle() {
    oracles::normal_matrix_points_lie_on_the_circle();
}

#[test]
fn lag_is_the_half_disc() {
    oracles::lag_is_the_half_disc();
}

#[test]
fn simulated_lag_stays_in_its_bound() {
    oracles::simulated_lag_stays_in_its_bound();
}

#[test]
fn hh_holds_its_fixed_point() {
    oracles::hh_holds_its_fixed_point();
}

#[test]
fn hh_has_no_current_at_reversal() {
    oracles::hh_has_no_current_at_reversal();
}

#[test]
fn hh_sampling_is_reproducible() {
    oracles::hh_sampling_is_reproducible();
}
