#include "unfold/cli.hpp"

int main(int argc, char** argv) {
    return unfold::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
