// Drops the last element of every output; used to check that the harness
// reports failures.
#include "sut_main.hpp"

int main(int argc, char** argv)
{
    return sut_main(argc, argv, conman::demo::mutant_transform);
}
