//! Removing repeated queries: the static caching rewrite and the re-eval
//! compilation into a specification that restarts on contradiction.

use propalg::congruence::{basic_form, equal};
use propalg::projective::unfold_levels;
use propalg::transform::{caching, is_monotest, re_eval, Variant};
use propalg::{parse_term, Variety};

fn main() -> propalg::Result<()> {
    let p = basic_form(&parse_term("(a land b) lor (a land not b)")?);
    let c = caching(&p);
    println!("{p}\n  cached: {c}");
    println!("  monotest {} -> {}, st-equal {}", is_monotest(&p), is_monotest(&c), equal(&p, &c, Variety::St));

    let q = basic_form(&parse_term("T <| a |> (F <| a |> T)")?);
    for variant in [Variant::Plain, Variant::Dlni, Variant::DlniSubst] {
        let spec = re_eval(&q, variant)?;
        println!("\nre-eval {variant}:\n{}", spec.to_file_string().trim_end());
        let levels = unfold_levels(&spec, "X0", 3)?;
        println!("  approximants: {}", levels.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", "));
    }
    Ok(())
}
