#include "cmrad/driver.hpp"

int main(int argc, char** argv) { return cmrad::cli::run(argc, argv); }
