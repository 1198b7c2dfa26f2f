#include "railsched/cli.hpp"

int main(int argc, char** argv) { return railsched::cli::main(argc, argv); }
