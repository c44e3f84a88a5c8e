#include "wsnd/app.hpp"

int main(int argc, char** argv) { return wsnd::app::main(argc, argv); }
