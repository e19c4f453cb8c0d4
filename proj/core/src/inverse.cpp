#include "ucat/inverse.hpp"
