#include <bevo/cli.hpp>

#include <iostream>

int main( int argc, char** argv ) { return bevo::cli::run( argc, argv, std::cout, std::cerr ); }
