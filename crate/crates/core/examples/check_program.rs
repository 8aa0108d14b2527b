//! Checks several files together, sharing one signature environment.

use exgrad::{check_sources, SourceFile};

fn main() {
    let lib = SourceFile::new(
        "lib/temp.ex",
        r#"defmodule Temp do
  @spec to_f(integer) :: float
  def to_f(c) do c * 9 / 5 + 32 end

  @spec describe(float) :: string
  def describe(x) do
    if x > 90 do "hot" else x end
  end
end
"#,
    );
    let app = SourceFile::new(
        "app.ex",
        r#"reading = Temp.to_f(30)
Temp.describe(reading) <> "!"
Temp.to_f("thirty")
Unknown.thing(1) + 1
"#,
    );

    let report = check_sources(&[lib, app]);
    for d in &report.diagnostics {
        println!("{}:{}:{} {} {}", d.file, d.span.line, d.span.col, d.code, d.message);
    }
    println!(
        "{} errors, {} warnings",
        report.errors().count(),
        report.warnings().count()
    );
}
