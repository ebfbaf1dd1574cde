# Copyright (c) 2022 The URT Tomography Tool authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""
This file contains a factory class to instantiate available reconstruction
methods.

"""

from typing import List

from urt_tomo.urt_recon.recon_method import ReconstructionMethod

# import reconstruction methods
from urt_tomo.urt_recon.cgls import CglsMethod
from urt_tomo.urt_recon.spectral_method import SpectralMethod
from urt_tomo.urt_recon.total_variation import TvMethod

__all__ = ["ReconstructionMethodFactory"]


class ReconstructionMethodFactory(object):
    """
    This class provides a factory that instantiates available reconstruction methods.

    Parameters
    ----------
        registration_map : dict
            Map between method identifiers and the respective method class
    """

    registration_map: dict = {}

    @classmethod
    def register(cls, identifier: str, method) -> None:
        """
        Class method that registers a reconstruction method.

        Parameters
        ----------
            identifier: str
                Identifier of the method

            method:
                Class of the respective method
        """

        cls.registration_map.update({identifier: method})

    @classmethod
    def get_method(cls, identifier: str) -> ReconstructionMethod:
        """
        Creates a new instance of a reconstruction method by identifier.

        Raises
        ------
        LookupError
            If no method is registered under the identifier.
        """

        if identifier not in cls.registration_map:
            raise LookupError(f"unknown reconstruction method '{identifier}', expected one of {cls.identifiers()}")
        return cls.registration_map[identifier]()

    @classmethod
    def get_name(cls, identifier: str) -> str:
        return cls.get_method(identifier).name

    @classmethod
    def identifiers(cls) -> List[str]:
        return sorted(cls.registration_map)

    @classmethod
    def get_all_methods(cls) -> List[ReconstructionMethod]:
        """
        Get all methods from registration map.

        Returns
        -------
        List with reconstruction methods from the registry.
        """

        return [method() for method in cls.registration_map.values()]


# Registration of reconstruction methods
ReconstructionMethodFactory.register(identifier="cgls", method=CglsMethod)
ReconstructionMethodFactory.register(identifier="tv", method=TvMethod)
ReconstructionMethodFactory.register(identifier="spectral", method=SpectralMethod)
