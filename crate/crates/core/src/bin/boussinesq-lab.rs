fn main() {
    std::process::exit(boussinesq_lab::cli::main_from_env());
}
