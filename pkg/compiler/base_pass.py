"""
编译阶段基类
定义所有编译阶段（pass）的公共接口
"""

from abc import ABC, abstractmethod
from typing import Any, Dict

from utils.logger import LoggerMixin


class BasePass(ABC, LoggerMixin):
    """编译阶段抽象基类

    每个阶段是输入到输出的纯函数；实例本身不保存跨调用的状态，
    因此同一实例可被多个编译单元复用。
    """

    #: 阶段名，用于计时与 --time 输出
    stage: str = "pass"

    @abstractmethod
    def run(self, data: Any) -> Any:
        """
        执行本阶段

        Args:
            data: 上一阶段的输出

        Returns:
            本阶段的输出
        """

    def __call__(self, data: Any) -> Any:
        self.logger.debug(f"[{self.stage}] 开始")
        result = self.run(data)
        self.logger.debug(f"[{self.stage}] 完成")
        return result

    def get_pass_info(self) -> Dict[str, Any]:
        """
        获取阶段信息

        Returns:
            阶段信息字典
        """
        return {
            "name": self.__class__.__name__,
            "stage": self.stage,
            "description": (self.__doc__ or "无描述").strip().splitlines()[0],
        }
