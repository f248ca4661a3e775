#include "hamlab/hamlab.hpp"
int main() { return 0; }
