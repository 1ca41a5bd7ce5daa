#include "../src/cli/app.hpp"

int main(int argc, char** argv) { return hosim::cli::run_cli(argc, argv); }
