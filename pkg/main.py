#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
zscomp 源码目录入口，未安装时可直接运行: python main.py classify --config ...
"""
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "src"))

from zscomp.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
