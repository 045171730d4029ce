fn main() {
    // CLI arrives with the harness module.
}
