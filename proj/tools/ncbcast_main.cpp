#include "ncbcast/cli_app.hpp"

int main(int argc, char** argv) { return ncbcast::cli_main(argc, argv); }
