"""
应用层：运行配置与命令对应的应用服务
"""
