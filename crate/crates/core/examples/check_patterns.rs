//! Checks patterns against the type of the value they match.

use exgrad::parse_type;
use exgrad::parser::parse_pattern;
use exgrad::pattern::{check_case_pattern, check_pattern, PatternMode};
use exgrad::VarEnv;

fn show(env: &VarEnv) -> String {
    let parts: Vec<String> = env.iter().map(|(x, t)| format!("{x}: {t}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn main() {
    let mut sigma = VarEnv::new();
    sigma.insert("limit", parse_type("integer").unwrap());

    let cases = [
        ("{x, y}", "{integer, string}", PatternMode::Match),
        ("[h | t]", "[float]", PatternMode::Match),
        ("%{:name => n}", "%{:name => string, :age => integer}", PatternMode::Match),
        ("{x, x}", "{integer, integer}", PatternMode::Match),
        ("{x, x}", "{integer, string}", PatternMode::Match),
        ("^limit", "integer", PatternMode::Match),
        ("3", "float", PatternMode::Spec),
        ("{a, b}", "any", PatternMode::Match),
    ];
    for (p, t, mode) in cases {
        let pat = parse_pattern(p).unwrap();
        let ty = parse_type(t).unwrap();
        match check_pattern(&pat, &ty, &sigma, &VarEnv::new(), mode) {
            Ok(env) => println!("{p:<12} : {t:<30} {mode:?} binds {}", show(&env)),
            Err(d) => println!("{p:<12} : {t:<30} {mode:?} {} ({})", d.code, d.message),
        }
    }

    // a case clause that can never match still binds, with a warning
    let pat = parse_pattern(":no").unwrap();
    let (_, warning) = check_case_pattern(&pat, &parse_type(":yes").unwrap(), &sigma, &VarEnv::new()).unwrap();
    println!(":no against :yes -> {:?}", warning.map(|w| w.code));
}
