//! Binary entry point for the `cogen` command.

use clap::Parser;

fn main() {
    let cli = match cogen::cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful exits; everything
            // else is a usage error.
            let code = i32::from(!matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ));
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(cogen::cli::main_entry(&cli));
}
