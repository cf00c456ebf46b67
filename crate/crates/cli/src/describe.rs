//! Human-readable descriptions and config schemas for `list` / `describe`.

use crate::config::ExperimentKind;

pub struct Description {
    pub summary: &'static str,
    pub target: &'static str,
    pub required: &'static [&'static str],
    pub optional: &'static [&'static str],
}

pub fn describe(kind: ExperimentKind) -> Description {
    use ExperimentKind::*;
    match kind {
        SingularDecay => Description {
            summary: "Singular values of e^{-tH1} - e^{-tH2} for a centre-cell bump at several amplitudes \
                      (\"inf\" deletes the support sites); fits log mu_n against n^{1/d} and n^{2/d}.",
            target: "Theorem 1 (exponential singular-value decay) and its remarks on amplitude independence",
            required: &["seed", "model.dimension", "model.side", "model.spacing"],
            optional: &["model.single_site", "model.background", "model.magnetic_field", "numeric.amplitudes",
                        "numeric.t", "numeric.floor", "numeric.skip_leading", "numeric.dense_cap"],
        },
        SsfIdentities => Description {
            summary: "Krein trace identity, invariance principle, interlacing and sign of the spectral shift \
                      function on the model pair and on random dense pairs.",
            target: "Krein's trace identity and the invariance principle",
            required: &["seed", "model"],
            optional: &["numeric.amplitude", "numeric.energy", "numeric.epsilon_grid", "numeric.trials"],
        },
        FtBounds => Description {
            summary: "F_t functional, its Legendre dual, the SSF integral bound with fitted K1, the \
                      Hundertmark-Simon majorization and the dual bound with K2 = t^{-d}.",
            target: "Theorem 2 (integral bounds on the spectral shift function)",
            required: &["seed", "model"],
            optional: &["numeric.amplitude", "numeric.t", "numeric.upper", "numeric.floor"],
        },
        Wegner => Description {
            summary: "Monte Carlo mean of the eigenvalue count in [E-eps, E+eps] for the alloy-type model; \
                      the eps-scaling check fits the exponent of the mean and reports \
                      mean / (s(mu,2eps) (log 1/eps)^d |Lambda|).",
            target: "Theorem 3 (Wegner estimate) and the eps-scaling of the mean eigenvalue count",
            required: &["seed", "model", "numeric.epsilon_grid", "numeric.realizations"],
            optional: &["numeric.energy", "numeric.dense_cap"],
        },
        Ids => Description {
            summary: "Disorder-averaged finite-volume IDS on an energy grid for a sequence of volumes, \
                      with sup-distances and an optional Hoelder-modulus check.",
            target: "Corollary of Theorem 3 (continuity of the integrated density of states)",
            required: &["seed", "model.dimension", "model.spacing", "numeric.sides", "numeric.energies",
                        "numeric.realizations"],
            optional: &["numeric.pairs", "model.disorder", "model.single_site", "model.background"],
        },
        Lemma3 => Description {
            summary: "Randomized check of int [phi(x+eps) - phi(x)] dmu <= s(mu,eps) [phi(b+eps) - phi(a)] \
                      for monotone phi.",
            target: "Lemma 3 (partial integration for singular measures)",
            required: &["seed", "model.disorder"],
            optional: &["numeric.trials"],
        },
        Weyl => Description {
            summary: "Weyl-type lower bound on the lowest eta*N eigenvalues at spacings h and h/2, and the \
                      semigroup trace bound on a t-grid above 4h^2.",
            target: "Lemma 1 (Weyl lower bound) and the trace bound in its proof",
            required: &["seed", "model"],
            optional: &["numeric.eta", "numeric.t_grid", "model.mask"],
        },
        TraceBound => Description {
            summary: "Tr[rho(H2) - rho(H1)] for switch functions of width eps, against the rank bound and \
                      the C_E |log eps|^d law.",
            target: "Theorem 2, trace bound for smooth switch functions",
            required: &["seed", "model"],
            optional: &["numeric.amplitude", "numeric.energy", "numeric.epsilon_grid"],
        },
    }
}
