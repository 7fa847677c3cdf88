"""spjoin 格式化模块"""
