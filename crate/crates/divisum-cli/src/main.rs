fn main() {
    // die quietly on a closed pipe (e.g. `divisum list | head`) like other
    // line-oriented tools instead of panicking in the print machinery
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(divisum_cli::run(std::env::args().skip(1).collect()));
}
