//! Linear recursive specifications seen through their projections.

use propalg::projective::{eval_spec, is_projective, unfold_levels, IndexedSpec, LinearSpec};
use propalg::valuation::ValuationTable;

const LOOP: &str = "\
# while not a do b
X1 = X3 <| a |> X2
X2 = b then X1
X3 = T
";

fn main() -> propalg::Result<()> {
    let spec = LinearSpec::parse(LOOP)?;
    let levels = unfold_levels(&spec, "X1", 4)?;
    for (n, t) in levels.iter().enumerate() {
        println!("pi_{}: {t}", n + 1);
    }
    println!("projective: {}", is_projective(&levels));

    let h = ValuationTable::parse_file("atoms a b\ndepth 6\ndefault F\na.b.a -> T\n")?;
    let (value, trace) = eval_spec(&spec, "X1", &h, 100)?;
    println!("run: {value} after {} queries", trace.len());
    let never = ValuationTable::parse_file("atoms a b\ndepth 12\nstatic a=F b=T\n")?;
    println!("run with a always F: {}", eval_spec(&spec, "X1", &never, 10)?.0);

    for (n, t) in unfold_levels(&IndexedSpec::primes(), "X1", 5)?.iter().enumerate() {
        println!("primes pi_{}: {t}", n + 1);
    }
    Ok(())
}
