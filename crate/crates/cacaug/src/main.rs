fn main() {
    // Die quietly when the consumer closes the pipe (`cacaug cuts ... | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(cacaug::cli::run(args));
}
