//! Valuation tables: evaluation with a query trace, variety membership, and
//! the oracle that compares statements by running them.

use propalg::valuation::model::{equiv_oracle, oracle_verdict};
use propalg::valuation::{evaluate, in_variety, ValuationTable};
use propalg::{parse_term, Variety};

const TABLE: &str = "\
atoms a b
depth 3
default T
a.a -> F
";

fn main() -> propalg::Result<()> {
    let h = ValuationTable::parse_file(TABLE)?;
    for k in Variety::CHAIN {
        println!("table in {k}: {}", in_variety(&h, k));
    }
    for text in ["a", "a <| a |> F", "b <| a |> F"] {
        let r = evaluate(&parse_term(text)?, &h)?;
        println!("{text} -> {} (trace {})", if r.value { 'T' } else { 'F' }, r.trace_string());
    }

    let (p, q) = (parse_term("T")?, parse_term("T <| a |> T")?);
    for k in [Variety::Fr, Variety::Mem, Variety::St] {
        println!("{p} vs {q} under {k}: equivalent {}, {:?}", equiv_oracle(&p, &q, k)?, oracle_verdict(&p, &q, k)?);
    }
    Ok(())
}
