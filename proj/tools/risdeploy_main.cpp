#include "risdeploy/commands.hpp"

int main(int argc, char** argv) { return risdeploy::run_cli(argc, argv); }
