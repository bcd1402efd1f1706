#include "icw/cli.hpp"

int main(int argc, char** argv) { return icw::cli::dispatch(argc, argv); }
