#include "commands.hpp"

int main(int argc, char** argv) { return hsu2::cli::run(argc, argv); }
