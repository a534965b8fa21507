#include "polykinetic/cli.hpp"

int main(int argc, char** argv)
{
    return polykinetic::cli_main(argc, argv);
}
