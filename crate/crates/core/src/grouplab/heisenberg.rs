//! The Heisenberg group in coordinates: `(a, b, c)` stands for `z^c y^b x^a`
//! rearranged so that `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.

use serde_json::json;

use crate::error::Result;
use crate::padic::{PAdicRing, TruncatedPAdic};
use crate::report::{verdict, Verdict, WitnessReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeisenbergElement {
    pub a: TruncatedPAdic,
    pub b: TruncatedPAdic,
    pub c: TruncatedPAdic,
}

impl HeisenbergElement {
    pub fn new(ring: &PAdicRing, a: i128, b: i128, c: i128) -> Self {
        HeisenbergElement {
            a: ring.from_int(a),
            b: ring.from_int(b),
            c: ring.from_int(c),
        }
    }

    pub fn identity(ring: &PAdicRing) -> Self {
        Self::new(ring, 0, 0, 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        HeisenbergElement {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c + self.a * o.b,
        }
    }

    pub fn inverse(&self) -> Self {
        HeisenbergElement {
            a: -self.a,
            b: -self.b,
            c: -self.c + self.a * self.b,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(&self.a.ring());
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).mul(&self.inverse()).mul(&o.inverse())
    }

    /// Membership in `H = <x, y^p>`, which is `{b ≡ c ≡ 0 mod p}`.
    pub fn in_subgroup(&self) -> bool {
        let p = self.a.p();
        self.b.value().is_multiple_of(p) && self.c.value().is_multiple_of(p)
    }

    pub fn coords(&self) -> [i128; 3] {
        [self.a.signed(), self.b.signed(), self.c.signed()]
    }
}

/// Closure of `{b ≡ c ≡ 0 mod p}` under products and inverses. Both conditions
/// only see residues mod `p`, so running over `(Z/p)^3` covers everything.
pub fn subgroup_closed(p: u64) -> Result<bool> {
    let ring = PAdicRing::new(p, 1)?;
    let members: Vec<HeisenbergElement> = (0..p as i128)
        .map(|a| HeisenbergElement::new(&ring, a, 0, 0))
        .collect();
    let ok = members.iter().all(|g| g.inverse().in_subgroup())
        && members.iter().all(|g| members.iter().all(|h| g.mul(h).in_subgroup()));
    Ok(ok)
}

pub fn heisenberg_witness(p: u64, k: u32) -> Result<WitnessReport> {
    let ring = PAdicRing::new(p, k.max(2))?;
    let x = HeisenbergElement::new(&ring, 1, 0, 0);
    let y = HeisenbergElement::new(&ring, 0, 1, 0);
    let z = HeisenbergElement::new(&ring, 0, 0, 1);
    let one = HeisenbergElement::identity(&ring);
    let mut report = WitnessReport::new("heisenberg", json!({"p": p, "precision": ring.precision()}));
    let anchor = "Heisenberg pro-p group is not Frattini-resistant";

    let xy = x.commutator(&y);
    let central = x.commutator(&z) == one && y.commutator(&z) == one;
    report.push(
        "[x,y] = z and z is central",
        anchor,
        verdict(xy == z && central),
        json!({"[x,y]": xy.coords(), "[x,z]": x.commutator(&z).coords(), "[y,z]": y.commutator(&z).coords()}),
    );

    let yp = y.pow(p);
    let lhs = x.commutator(&yp);
    let zp = z.pow(p);
    report.push(
        "[x,y^p] = z^p",
        anchor,
        verdict(lhs == zp),
        json!({"[x,y^p]": lhs.coords(), "z^p": zp.coords()}),
    );

    let generators_in = x.in_subgroup() && yp.in_subgroup();
    let closed = subgroup_closed(p)?;
    report.push(
        "H = <x, y^p> is the subgroup {b ≡ c ≡ 0 mod p}",
        anchor,
        verdict(generators_in && closed && zp.in_subgroup() && one.in_subgroup()),
        json!({"generators_in_H": generators_in, "closed_mod_p": closed}),
    );

    report.push(
        "z^p lies in Φ(H), being the commutator [x, y^p] of two generators of H",
        anchor,
        verdict(lhs == zp && generators_in),
        json!({"expression": "[x, y^p]", "value": lhs.coords()}),
    );

    report.push(
        "z is not in H",
        anchor,
        verdict(!z.in_subgroup()),
        json!({"z": z.coords(), "c mod p": z.c.value() % p}),
    );

    report.push(
        "z^p ∈ Φ(H) with z ∉ H violates the Frattini-resistance criterion",
        "criterion: x^p ∈ Φ(H) for finitely generated H forces x ∈ H",
        if lhs == zp && !z.in_subgroup() { Verdict::Verified } else { Verdict::Refuted },
        json!({"element": "z", "subgroup": "<x, y^p>"}),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn witness_holds_for_small_primes() {
        for p in [2, 3, 5] {
            let r = heisenberg_witness(p, 6).unwrap();
            assert!(r.all_verified(), "{p}: {r:?}");
        }
    }

    #[test]
    fn commutator_at_three() {
        let ring = PAdicRing::new(3, 4).unwrap();
        let x = HeisenbergElement::new(&ring, 1, 0, 0);
        let y3 = HeisenbergElement::new(&ring, 0, 3, 0);
        assert_eq!(x.commutator(&y3).coords(), [0, 0, 3]);
    }

    proptest! {
        #[test]
        fn group_axioms(v in prop::array::uniform9(-100i128..100)) {
            let ring = PAdicRing::new(5, 6).unwrap();
            let g = HeisenbergElement::new(&ring, v[0], v[1], v[2]);
            let h = HeisenbergElement::new(&ring, v[3], v[4], v[5]);
            let k = HeisenbergElement::new(&ring, v[6], v[7], v[8]);
            prop_assert_eq!(g.mul(&h).mul(&k), g.mul(&h.mul(&k)));
            prop_assert_eq!(g.mul(&g.inverse()), HeisenbergElement::identity(&ring));
        }
    }
}
