#pragma once

#define SOLITONLAB_VERSION "0.1.0"
