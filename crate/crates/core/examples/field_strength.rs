//! Field tensor, E and H, and the elimination coefficient iF1 + F2 of a scenario.

use dirac_reduce::dsl::builtin;
use dirac_reduce::fields::{elimination_coefficient, field_strength, potential_at};

fn main() -> dirac_reduce::Result<()> {
    for name in ["constant_E1", "crossed_EH", "wave_E1"] {
        let s = builtin(name)?;
        let p = potential_at(&s, [0.0, 1.0, 0.0, 0.0], 3)?;
        let f = field_strength(&p)?;
        let e: Vec<_> = f.e.iter().map(|j| j.value().re).collect();
        let h: Vec<_> = f.h.iter().map(|j| j.value().re).collect();
        let k = elimination_coefficient(&f).value();
        println!("{name:<12} E = {e:?}  H = {h:?}  iF1+F2 = {k}");
    }
    Ok(())
}
