// SPDX-License-Identifier: Apache-2.0

#include "bafsynth/cli.hpp"

int main(int argc, char** argv) { return bafsynth::cli::run(argc, argv); }
