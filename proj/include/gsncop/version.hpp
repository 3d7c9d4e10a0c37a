#ifndef GSNCOP_VERSION_HPP
#define GSNCOP_VERSION_HPP

#define GSNCOP_VERSION "0.1.0"

#endif
