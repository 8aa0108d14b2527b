//! Parses a module and prints it back in canonical form.

use exgrad::parse_source;
use exgrad::pretty::print_program;

const SOURCE: &str = r#"
defmodule Geometry do
  @spec area({float, float}) :: float
  def area({w, h}) do w * h end

  def label(%{:name => n}) do
    "shape " <> n
  end
end
"#;

fn main() {
    let prog = parse_source(SOURCE).expect("valid source");
    let printed = print_program(&prog);
    println!("{printed}");

    // printing is a fixed point
    let again = print_program(&parse_source(&printed).unwrap());
    assert_eq!(printed, again);

    match parse_source("def f(x do x end") {
        Ok(_) => unreachable!(),
        Err(e) => println!("syntax error: {e}"),
    }
}
