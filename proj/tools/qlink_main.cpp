#include "qlink/qlink.hpp"
int main() { return 0; }
