//! Literal reference values for the weight 16 example, stored verbatim.

pub struct Fixture {
    pub name: &'static str,
    pub locator: &'static str,
    pub value: &'static str,
}

pub const PETERSSON: Fixture = Fixture {
    name: "petersson_norm",
    locator: "weight 16 example, computing the L-value: <F,F>",
    value: "0.00000216906134759",
};
pub const PETERSSON_REL_TOL: f64 = 1e-11;

pub const RATIO_APPROX: Fixture = Fixture {
    name: "ratio_leading_digits",
    locator: "weight 16 example, computing the L-value: ratio at s = 22",
    value: "7.8323 + 10.2324i",
};

/// `(A + B sqrt(-3)) / D` at `s = 22`.
pub const RATIO_A: &str = "136547867422656337144320";
pub const RATIO_B: &str = "102994007489228654461440";
pub const RATIO_D: &str = "17433892055631543710491";
pub const RATIO_LOCATOR: &str = "weight 16 example, computing the L-value: exact ratio at s = 22";
pub const RATIO_DIGITS: f64 = 15.0;

pub const DENOMINATOR_PRIMES: Fixture = Fixture {
    name: "denominator_support",
    locator: "weight 16 example: denominator is a unit outside {7, 13}",
    value: "7,13",
};

pub const NUMERATOR_PRIMES: Fixture = Fixture {
    name: "numerator_support",
    locator: "weight 16 example: numerator prime list",
    value: "2,3,5,43,67,103,141264461964750634089522953623",
};

pub const ALPHA_37: Fixture = Fixture {
    name: "alpha_p",
    locator: "weight 16 example, p = 37: alpha_p expansion",
    value: "11,7,25",
};

pub const E_PRIME_37: Fixture = Fixture {
    name: "e_prime",
    locator: "weight 16 example, p = 37: E'_p(22, id) congruent to 1 mod p^6",
    value: "1 mod 37^6",
};

pub const KL_37: Fixture = Fixture {
    name: "kl_congruent_point",
    locator: "weight 16 example, p = 37: L_p(psi, -29) expansion",
    value: "12,36,23",
};

pub const VERDICT_37: Fixture = Fixture {
    name: "verdict",
    locator: "weight 16 example, p = 37: conclusion",
    value: "L_p unit, predicted Selmer order 1",
};

pub const VALUATION_67: Fixture = Fixture {
    name: "ratio_valuation",
    locator: "weight 16 example, p = 67: valuation under 8 + sqrt(-3)",
    value: "1",
};

pub const BOUND_67: Fixture = Fixture {
    name: "selmer_bound",
    locator: "weight 16 example, p = 67: trivial or cyclic of order p",
    value: "order <= p",
};

pub const DIRICHLET_439: Fixture = Fixture {
    name: "dirichlet_factor",
    locator: "weight 16 example, p = 439: L_p(psi, 7) expansion",
    value: "0,148,232",
};

pub const BOUND_439: Fixture = Fixture {
    name: "selmer_bound",
    locator: "weight 16 example, p = 439: order at most p, predicted zero",
    value: "at most p",
};

/// Unit valuations of the ratio (or of `L_p`) stated for the example primes.
pub const UNIT_LOCATOR: &str = "weight 16 example: p-adic unit";
