//! Walks the type lattice: subtyping, precision, `fits`, join and meet.

use exgrad::parse_type;
use exgrad::types::{fits, is_more_precise, is_subtype, join, meet, TypeUniverse};

fn main() {
    let t = |s: &str| parse_type(s).expect("valid type");
    let pairs = [
        ("integer", "float"),
        (":ok", "atom"),
        ("[integer]", "[float]"),
        ("(float) -> integer", "(integer) -> float"),
        ("%{:a => integer, :b => string}", "%{:a => float}"),
        ("any", "integer"),
        ("{integer, string}", "{integer, any}"),
    ];
    println!("{:<32} {:<24} {:>4} {:>5} {:>5}", "t", "u", "<:", "prec", "fits");
    for (a, b) in pairs {
        let (x, y) = (t(a), t(b));
        println!(
            "{a:<32} {b:<24} {:>4} {:>5} {:>5}",
            is_subtype(&x, &y),
            is_more_precise(&x, &y),
            fits(&x, &y)
        );
    }

    for (a, b) in [("integer", "string"), (":a", ":b"), ("{integer, :a}", "{float, atom}"), ("any", "string")] {
        println!("join({a}, {b}) = {}   meet = {}", join(&t(a), &t(b)), meet(&t(a), &t(b)));
    }

    let u = TypeUniverse::standard();
    println!("bounded universe: {} types, {} static", u.len(), u.static_indices().len());
}
