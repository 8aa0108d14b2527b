//! Gathers `@spec` declarations into a signature environment.

use exgrad::parse_source;
use exgrad::signatures::collect_signatures;

const SOURCE: &str = r#"
defmodule Shop do
  defmodule Cart do
    @spec total([float]) :: float
    def total(xs) do 0.0 end
  end

  @spec greet(string) :: string
  def greet(name) do "hi " <> name end

  @spec greet(string) :: integer
  def untyped(x) do x end
end
"#;

fn main() {
    let prog = parse_source(SOURCE).expect("valid source");
    let (sigs, problems) = collect_signatures(&prog);
    for line in sigs.dump() {
        println!("{line}");
    }
    for d in &problems {
        println!("{} at line {}: {}", d.code, d.span.line, d.message);
    }
    println!("lookup Shop.Cart.total/1 -> {:?}", sigs.lookup("Shop.Cart.total", 1).map(|t| t.to_string()));
}
