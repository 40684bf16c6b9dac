"""Default constants.  Values marked calibrated come from the bundled
``calibrate`` experiment; the nominal values are kept for reference and can
be restored from the command line."""

DIST = {
    "c_dist": 16.0,
    "c_rep": 12.0,
}

MAXCUT = {
    "C_mc": 6.3,  # calibrated
    "n_start_vertices": 16,
    "xi_scale": 4.0,  # calibrated
    "c_feas": 1.0,
    "c_dist": 1.0,  # calibrated
    "c_rep": 4.0,  # calibrated
}

# operating point used by the acceptance experiments at n=2000, d=8
MAXCUT_POINT = {"phi": 0.16, "eps": 0.01, "rho": 0.15}

NOMINAL = {
    "c_dist": 16.0,
    "c_rep": 12.0,
    "C_mc": 1.0,
    "xi_scale": 3600.0,
}

CLUSTER = {
    "c1": 0.5,
    "c_seeds": 1.0,
    "c_len": 0.15,  # calibrated
    "c_samples": 4.0,  # calibrated
    "theta_scale": 0.75,  # calibrated
    "max_len": 400,
}

E2LIN = {
    "c_lambda": 2.05e-4,  # calibrated; puts lambda near 0.05 at rho = phi = 0.16, q = 2
    "c_lambda_alg": 1.0,
    "c_feas": 0.01,
}

ULC = {
    "log10_c_xi": -35.15,
    "log10_c_xi0": -19.06,
    "log10_c_thr": -55.88,
    "log10_c_outer": 21.8,
    "c_volume": 1.0,
    "c_members": 16.0,
    "log10_c_eps": 130.0,
    "log10_c_rho": -58.0,
    "max_samples": 200000,
}
