//! Synthesizes types for standalone expressions.

use exgrad::{parse_expression, parse_type, synthesize, CheckContext, ModulePrefix, SignatureEnv};

fn main() {
    let root = ModulePrefix::root();
    let mut sigs = SignatureEnv::new();
    sigs.add_signature(&root, "half", 1, parse_type("(float) -> float").unwrap())
        .unwrap();
    let ctx = CheckContext::new(&sigs, &root);

    let sources = [
        "4 + 5",
        "4.0 + 5",
        "9 / 3",
        "[1, 2.5]",
        "{:ok, \"done\"}",
        "%{:a => 1, :b => true}[:b]",
        "half(3)",
        "Remote.call(1) + 2",
        "x = 3\nif x > 2 do :big else :small end",
        "case {1, \"s\"} do\n{n, s} -> n\nend",
        "3 + \"hi\"",
        "half(\"no\")",
        "y",
    ];
    for src in sources {
        let e = parse_expression(src).expect("valid expression");
        let s = synthesize(&e, &ctx);
        let shown = src.replace('\n', "; ");
        match s.ty() {
            Some(t) => println!("{shown:<44} : {t}"),
            None => println!("{shown:<44} ! {:?}", s.error_codes()),
        }
    }
}
