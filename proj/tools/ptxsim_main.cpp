#include "ptxsim/harness.hpp"

int main(int argc, char** argv) {
    return ptxsim::cli_main(argc, argv);
}
