def execute_command(image):
    image_patch = ImagePatch(image)
    backpack_patches = image_patch.find('backpack')
    for backpack in backpack_patches:
        if backpack.verify_property('backpack', 'red'):
            return {'function': 'navigate_to_object', 'inputs': (backpack.horizontal_center, backpack.vertical_center), 'box': [backpack.left, backpack.lower, backpack.right, backpack.upper]}
    return {'function': 'None', 'error': 'No red backpack found.'}
