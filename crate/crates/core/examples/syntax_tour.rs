//! Parsing, printing, desugaring and basic forms.

use propalg::congruence::basic_form;
use propalg::{desugar, parse, print, print_sugared};

fn main() -> propalg::Result<()> {
    for text in ["a land (b lor not c)", "a limp b", "a rimp b", "(T <| a |> F) <| b |> a", "a then b", "a liff b"] {
        let s = parse(text)?;
        let t = desugar(&s);
        println!("{text}");
        println!("  printed:    {}", print_sugared(&s));
        println!("  desugared:  {}", print(&t));
        println!("  basic form: {}", print(&basic_form(&t)));
    }
    if let Err(e) = parse("a <| b") {
        println!("parse error: {e}");
    }
    Ok(())
}
