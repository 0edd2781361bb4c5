#include "vqls/cli.hpp"

int main(int argc, char** argv) { return vqls::cli::dispatch_main(argc, argv); }
