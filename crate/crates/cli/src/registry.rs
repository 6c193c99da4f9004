use wheeling_core::rational::q;
use wheeling_core::sl2::{verify_coefficients, verify_sawon, verify_sl2_gluing, verify_sl2_wheel};
use wheeling_core::wheels::{
    coiling_values, verify_coiling, verify_composition_duality, verify_delta_omega,
    verify_double_diffop, verify_hopf, verify_pseudo_linearity_all, verify_wheeling,
    verify_wheels_lemma, BernoulliTable,
};
use wheeling_core::{Engine, Error, Result, VerificationReport};

pub struct Identity {
    pub name: &'static str,
    pub summary: &'static str,
    /// Default truncation degree (or `n` for the sl2 suites).
    pub default: usize,
    pub uses_omega: bool,
}

pub const REGISTRY: &[Identity] = &[
    Identity {
        name: "wheeling",
        summary: "Υ(D1 ∪ D2) = Υ(D1) # Υ(D2) on basis pairs",
        default: 4,
        uses_omega: true,
    },
    Identity {
        name: "composition",
        summary: "∂ of a union is the composite; both duality lemmas",
        default: 4,
        uses_omega: false,
    },
    Identity {
        name: "delta-omega",
        summary: "ΔΩ = Ω ⊗ Ω modulo link relations",
        default: 4,
        uses_omega: true,
    },
    Identity {
        name: "pseudo-linear",
        summary: "pseudo-linearity of Ω against strutless D",
        default: 6,
        uses_omega: true,
    },
    Identity {
        name: "coiling",
        summary: "the coiling identity at several n",
        default: 4,
        uses_omega: true,
    },
    Identity {
        name: "hopf",
        summary: "framed unknot and Hopf link, projected to boundary connected diagrams",
        default: 4,
        uses_omega: true,
    },
    Identity {
        name: "double-diffop",
        summary: "double differential operators on two labels",
        default: 4,
        uses_omega: false,
    },
    Identity {
        name: "wheels-lemma",
        summary: "leg counts of χ⁻¹ of products",
        default: 4,
        uses_omega: false,
    },
    Identity {
        name: "sl2-wheel",
        summary: "ω_2n ≡ 2 (strut)^n under sl2",
        default: 4,
        uses_omega: false,
    },
    Identity {
        name: "sl2-gluing",
        summary: "⟨s^n, s^n⟩ = (2n+1)! under sl2",
        default: 4,
        uses_omega: false,
    },
    Identity {
        name: "sawon",
        summary: "⟨Ω, s^n⟩ = (Θ/24)^n under sl2",
        default: 4,
        uses_omega: true,
    },
    Identity {
        name: "coefficients",
        summary: "Ω's coefficients solved from sl2 constraints",
        default: 8,
        uses_omega: true,
    },
];

pub fn lookup(name: &str) -> Option<&'static Identity> {
    REGISTRY.iter().find(|i| i.name == name)
}

pub struct Options {
    pub max_degree: Option<usize>,
    pub n: Option<usize>,
    pub complete: bool,
    pub fault: Option<usize>,
}

pub fn run(engine: &Engine, id: &Identity, opts: &Options) -> Result<VerificationReport> {
    let max = opts.max_degree.unwrap_or(id.default);
    let n = opts.n.unwrap_or(id.default);
    let mut table = BernoulliTable::compute(16.max(2 * max));
    if let Some(i) = opts.fault {
        if !id.uses_omega {
            return Err(Error::Domain(format!(
                "{} does not depend on Ω's coefficients",
                id.name
            )));
        }
        if i == 0 || i % 2 == 1 || i > table.max_index() {
            return Err(Error::Domain(format!("no coefficient b{i} to perturb")));
        }
        table = table.perturbed(i, &q(1, 1000));
    }
    match id.name {
        "wheeling" => verify_wheeling(engine, max, &table),
        "composition" => verify_composition_duality(engine, max),
        "delta-omega" => verify_delta_omega(engine, max, &table),
        "pseudo-linear" => verify_pseudo_linearity_all(engine, opts.n.unwrap_or(3), max, &table),
        "coiling" => verify_coiling(engine, &coiling_values(max, opts.complete), max, &table),
        "hopf" => verify_hopf(engine, max, &table),
        "double-diffop" => verify_double_diffop(engine, max),
        "wheels-lemma" => verify_wheels_lemma(engine, opts.n.unwrap_or(3), max),
        "sl2-wheel" => verify_sl2_wheel(n),
        "sl2-gluing" => verify_sl2_gluing(n),
        "sawon" => verify_sawon(n, &table),
        "coefficients" => verify_coefficients(max, &table),
        other => Err(Error::Domain(format!("unknown identity {other}"))),
    }
}
