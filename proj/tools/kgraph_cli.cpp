#include <kgraph/cli.hpp>

int main(int argc, char** argv) { return kgraph::cli::run(argc, argv, std::cout, std::cerr); }
