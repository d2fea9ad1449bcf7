//! Outward-rounded enclosures of decimal constants and of exp.

use mep_prove::interval::{format_hex, Interval};

fn main() -> mep_prove::Result<()> {
    let tenth = Interval::from_decimal("0.1")?;
    println!("0.1        ⊂ [{:e}, {:e}]  width {:e}", tenth.lo(), tenth.hi(), tenth.width());
    println!("           = [{}, {}]", format_hex(tenth.lo()), format_hex(tenth.hi()));

    let x = Interval::new(-1.0, 2.0);
    let e = x.exp()?;
    println!("exp[-1, 2] ⊂ [{:.17}, {:.17}]", e.lo(), e.hi());

    // Dependency: x - x is not zero for a wide interval.
    println!("x - x      = [{}, {}]", (x - x).lo(), (x - x).hi());
    println!("x²         = [{}, {}]", x.sqr().lo(), x.sqr().hi());

    let third = Interval::ONE.div(Interval::point(3.0))?;
    assert!(third.contains(1.0 / 3.0) && third.width() > 0.0);
    println!("1/3        ⊂ [{:.17}, {:.17}]", third.lo(), third.hi());
    Ok(())
}
