#include "bpcheck/cli.hpp"

#include <iostream>

int main( int argc, char** argv )
{
    return bpcheck::run_cli( std::vector< std::string >( argv, argv + argc ), std::cin, std::cout, std::cerr );
}
