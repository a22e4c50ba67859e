def execute_command(image):
    backpack_patches = ImagePatch(image).find('backpack')
    if len(backpack_patches) == 0:
        return {'function': 'None', 'error': 'No backpack found.'}
    backpack_patches.sort(key=lambda x: x.horizontal_center)
    backpack = backpack_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (backpack.horizontal_center, backpack.vertical_center), 'box': [backpack.left, backpack.lower, backpack.right, backpack.upper]}
