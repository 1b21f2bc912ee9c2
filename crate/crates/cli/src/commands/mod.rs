pub mod expose;
pub mod gaussian;
pub mod pattern;

use crate::args::ValidateArgs;
use crate::error::CliError;
use crate::validate;

pub fn validate_cmd(args: &ValidateArgs) -> Result<(), CliError> {
    let report = validate::run_suite(args.quick, args.seed);
    for check in &report.checks {
        println!(
            "{} {:<16} {} ({} ms){}",
            if check.passed { "PASS" } else { "FAIL" },
            check.id,
            check.name,
            check.millis,
            if check.detail.is_empty() {
                String::new()
            } else {
                format!(" — {}", check.detail)
            }
        );
    }
    let total: u128 = report.checks.iter().map(|c| c.millis).sum();
    if report.all_passed() {
        println!("all {} checks passed in {} ms", report.checks.len(), total);
        Ok(())
    } else if report.any_non_convergent() {
        Err(CliError::NonConvergent(format!(
            "failing checks: {}",
            report.failed_ids().join(", ")
        )))
    } else {
        Err(CliError::Validation(format!(
            "failing checks: {}",
            report.failed_ids().join(", ")
        )))
    }
}
