#include "cardio/cli.hpp"

int main(int argc, char** argv) { return cardio::cli_main(argc, argv); }
