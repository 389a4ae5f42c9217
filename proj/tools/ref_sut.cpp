#include "sut_main.hpp"

int main(int argc, char** argv)
{
    return sut_main(argc, argv, conman::demo::reference_transform);
}
