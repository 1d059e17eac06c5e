#include "mlnf/cli.hpp"

int main(int argc, char** argv) { return mlnf::cli_main(argc, argv); }
