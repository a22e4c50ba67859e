def execute_command(image):
    image_patch = ImagePatch(image)
    bin_patches = image_patch.find('recycle bin')
    if len(bin_patches) == 0:
        return {'function': 'None', 'error': 'No recycle bin found.'}
    bin = bin_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (bin.horizontal_center, bin.vertical_center), 'box': [bin.left, bin.lower, bin.right, bin.upper]}
