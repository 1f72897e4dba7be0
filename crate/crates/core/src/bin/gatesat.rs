// SPDX-License-Identifier: Apache-2.0

use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let code = gatesat::cli::run(std::env::args_os(), &mut io::stdout().lock());
    ExitCode::from(code as u8)
}
