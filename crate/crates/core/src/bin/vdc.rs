fn main() -> std::process::ExitCode {
    vdcorput::cli::main()
}
