//! Torsion in the oriented groups of the triangles `y → x, z → y` with
//! `z → x` (`ε = 1`) or `z -- x` (`ε = 0`).
//!
//! Collection gives `[x, y] = y^q` and `[y^q, z] = z^((1+q)^q - 1)`. On the
//! other hand `x` and `y` act on `<z>` through commuting units, so
//! `[[x, y], z] = 1`. Hence `z^((1+q)^q - 1) = 1`.

use serde::Serialize;
use serde_json::json;

use super::rewrite::{ActionSystem, Normalized, Word};
use crate::error::{Error, Result};
use crate::padic::{check_claims, minimum_precision, PAdicRing, PUnit, Valuation};
use crate::presentation::PrimePower;
use crate::report::{verdict, WitnessReport};

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub epsilon: u8,
    pub q: u64,
    /// `(1+q)^q - 1`, when it fits in 128 bits.
    pub exponent: Option<u128>,
    pub exponent_residue: u64,
    pub valuation: Valuation,
    /// `act([x, y]) - 1`, with `act` the action on `<z>`.
    pub commutator_action_minus_one: u64,
    pub x_y_commutator: String,
    pub yq_z_commutator: String,
}

pub fn torsion_exponent(epsilon: u8, params: PrimePower, k: u32) -> Result<TorsionReport> {
    if epsilon > 1 {
        return Err(Error::InvalidParameters("epsilon must be 0 or 1".into()));
    }
    if k < minimum_precision(params.f) {
        return Err(Error::InvalidParameters(format!("precision {k} is below 2f + 4")));
    }
    let ring = PAdicRing::new(params.p, k)?;
    let q = params.q as i128;
    let unit = PUnit::one_plus(&ring, q)?;
    let x_on_z = unit.pow_i64(epsilon as i64);

    let xy = ActionSystem::new(["x", "y"], ring).acts("x", "y", unit)?;
    let comm = Word::commutator(&xy.word(&[("x", 1)])?, &xy.word(&[("y", 1)])?);
    let comm_nf = match xy.normalize(&comm) {
        Normalized::Normal(w) => w,
        other => return Err(Error::Internal(format!("[x,y] did not collect: {other:?}"))),
    };
    if comm_nf != xy.word(&[("y", q)])? {
        return Err(Error::Internal(format!("[x,y] collected to {}", xy.render(&comm_nf))));
    }

    let yz = ActionSystem::new(["y", "z"], ring).acts("y", "z", unit)?;
    let yq_z = Word::commutator(&yz.word(&[("y", q)])?, &yz.word(&[("z", 1)])?);
    let yq_z_nf = match yz.normalize(&yq_z) {
        Normalized::Normal(w) => w,
        other => return Err(Error::Internal(format!("[y^q,z] did not collect: {other:?}"))),
    };
    let exponent = unit.pow_i64(params.q as i64).get() - ring.one();
    if yq_z_nf != yz.letter("z", exponent)? {
        return Err(Error::Internal(format!("[y^q,z] collected to {}", yz.render(&yq_z_nf))));
    }

    // units commute, so the action of a commutator is trivial
    let act = x_on_z.mul(&unit).mul(&x_on_z.inv()).mul(&unit.inv());
    let exact = u32::try_from(params.q)
        .ok()
        .and_then(|e| (params.q as u128 + 1).checked_pow(e))
        .map(|v| v - 1);
    Ok(TorsionReport {
        epsilon,
        q: params.q,
        exponent: exact,
        exponent_residue: exponent.value(),
        valuation: exponent.valuation(),
        commutator_action_minus_one: (act.get() - ring.one()).value(),
        x_y_commutator: xy.render(&comm_nf),
        yq_z_commutator: yz.render(&yq_z_nf),
    })
}

pub fn torsion_witness(params: PrimePower, k: u32) -> Result<WitnessReport> {
    let mut report = WitnessReport::new(
        "torsion",
        json!({"p": params.p, "f": params.f, "q": params.q, "precision": k}),
    );
    let claims = check_claims(params.p, params.f, k)?;
    for epsilon in [1u8, 0] {
        let t = torsion_exponent(epsilon, params, k)?;
        let anchor = if epsilon == 1 {
            "triangle y → x, z → x, z → y"
        } else {
            "triangle y → x, z -- x, z → y"
        };
        let expected = Valuation::Exact(2 * params.f);
        report.push(
            format!("z^((1+q)^q - 1) = 1 with (1+q)^q - 1 of valuation 2f (ε = {epsilon})"),
            anchor,
            verdict(
                t.commutator_action_minus_one == 0
                    && t.valuation == expected
                    && claims.claims[0].computed == t.valuation,
            ),
            serde_json::to_value(&t).expect("torsion report serializes"),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_and_valuations() {
        let t = torsion_exponent(1, PrimePower::new(3, 1).unwrap(), 8).unwrap();
        assert_eq!((t.exponent, t.valuation), (Some(63), Valuation::Exact(2)));
        assert_eq!(t.commutator_action_minus_one, 0);
        assert_eq!(t.yq_z_commutator, "z^63");
        let t = torsion_exponent(0, PrimePower::new(2, 2).unwrap(), 8).unwrap();
        assert_eq!((t.exponent, t.valuation), (Some(624), Valuation::Exact(4)));
        assert!(torsion_exponent(2, PrimePower::new(3, 1).unwrap(), 8).is_err());
        assert!(torsion_witness(PrimePower::new(5, 1).unwrap(), 12).unwrap().all_verified());
    }
}
