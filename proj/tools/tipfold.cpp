#include "tipfold/cli.hpp"

int main(int argc, char** argv) { return tipfold::cli::run(argc, argv); }
