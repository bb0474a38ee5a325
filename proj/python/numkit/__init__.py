from ._numkit import *  # noqa: F401,F403
