//! The built-in law suite, run under every congruence of the chain, and a
//! user-supplied law.

use propalg::laws::{check_law, run_suite};
use propalg::{parse, Variety};

fn main() -> propalg::Result<()> {
    for k in Variety::CHAIN {
        let outcomes = run_suite(k);
        let holding: Vec<&str> = outcomes.iter().filter(|o| o.holds).map(|o| o.law.name).collect();
        let passed = outcomes.iter().filter(|o| o.pass()).count();
        println!("{k:>4}: {passed}/{} as documented, {} laws hold", outcomes.len(), holding.len());
    }
    let (lhs, rhs) = (parse("x land (y lor z)")?, parse("(x land y) lor (x land z)")?);
    for k in Variety::CHAIN {
        println!("left distributivity under {k}: {}", check_law(&lhs, &rhs, k));
    }
    Ok(())
}
