fn main() -> std::process::ExitCode {
    twostring::cli::main()
}
