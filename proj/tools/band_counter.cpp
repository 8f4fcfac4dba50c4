#include <bandcount/cli.hpp>

int main(int argc, char** argv) { return bandcount::cli::run(argc, argv); }
