//! Renders diagnostics as text and as JSON.

use exgrad::diagnostics::{render_json, render_text};
use exgrad::{check_sources, SourceFile};

fn main() {
    let src = "m = %{:hello => \"world\"}\nm[:strange] <> \"bye\"\n{a, a} = {1, :two}\n";
    let report = check_sources(&[SourceFile::new("demo.ex", src)]);
    for d in &report.diagnostics {
        println!("{}", render_text(d, src));
    }
    println!("{}", render_json(&report.diagnostics));
}
