"""As-Me 测试包"""
