//! Removing specs never turns an accepted program into a rejected one.

use exgrad::ast::Item;
use exgrad::{check_program, parse_source};

const SOURCE: &str = r#"
defmodule Counter do
  @spec bump(integer) :: integer
  def bump(n) do n + 1 end

  @spec twice(integer) :: integer
  def twice(n) do bump(bump(n)) end
end
Counter.twice(4) + 1
"#;

fn strip(items: &mut Vec<Item>) {
    items.retain(|i| !matches!(i, Item::Spec(_)));
    for i in items {
        if let Item::Module(m) = i {
            strip(&mut m.body);
        }
    }
}

fn main() {
    let typed = parse_source(SOURCE).unwrap();
    let mut untyped = typed.clone();
    strip(&mut untyped.items);

    let before = check_program(&typed);
    let after = check_program(&untyped);
    println!("with specs:    {} diagnostics", before.len());
    println!("without specs: {} diagnostics", after.len());
    assert!(before.iter().all(|d| !d.is_error()));
    assert!(after.iter().all(|d| !d.is_error()));

    // the converse does not hold: a spec can reject what untyped code allows
    let strict = parse_source("@spec f(integer) :: string\ndef f(x) do x end").unwrap();
    let loose = parse_source("def f(x) do x end").unwrap();
    println!("strict: {:?}", check_program(&strict).iter().map(|d| d.code).collect::<Vec<_>>());
    println!("loose:  {:?}", check_program(&loose).iter().map(|d| d.code).collect::<Vec<_>>());
}
